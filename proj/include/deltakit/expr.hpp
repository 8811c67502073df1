#pragma once

// Defining-function expression trees: polynomials in the real coordinates
// x1..x{2n} plus integer powers and exp-composition. Two evaluation paths
// share one tree: plain doubles (fast) and second-order duals (exact
// gradient + Hessian).
//
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ('^' uint)?
//   atom   := number | x<k> | exp '(' expr ')' | '(' expr ')' | '-' factor

#include <memory>
#include <string>
#include <vector>

#include "deltakit/dual.hpp"

namespace dk {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { constant, variable, add, sub, mul, neg, pow, exp_fn };

  Kind kind;
  double cval = 0.0;  // constant
  int var = -1;       // variable index, 0-based into x1..x{2n}
  int ipow = 0;       // pow exponent
  ExprPtr lhs, rhs;

  static ExprPtr constant(double c);
  static ExprPtr variable(int idx0);
  static ExprPtr add(ExprPtr a, ExprPtr b);
  static ExprPtr sub(ExprPtr a, ExprPtr b);
  static ExprPtr mul(ExprPtr a, ExprPtr b);
  static ExprPtr neg(ExprPtr a);
  static ExprPtr pow(ExprPtr a, int k);
  static ExprPtr exp_of(ExprPtr a);
};

double eval(const Expr& e, const Vec& x);
Dual2 eval_dual(const Expr& e, const Vec& x);
Dual1 eval_dual1(const Expr& e, const Vec& x);

// highest variable index referenced, 1-based (0 for constant expressions)
int max_variable(const Expr& e);

// Parses the grammar above; throws Err::parse with position info.
ExprPtr parse_expression(const std::string& src);

std::string to_string(const Expr& e);

}  // namespace dk
