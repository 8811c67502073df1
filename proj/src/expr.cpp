#include "deltakit/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace dk {

ExprPtr Expr::constant(double c) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::constant;
  e->cval = c;
  return e;
}
ExprPtr Expr::variable(int idx0) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::variable;
  e->var = idx0;
  return e;
}
ExprPtr Expr::add(ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::add;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}
ExprPtr Expr::sub(ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::sub;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}
ExprPtr Expr::mul(ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::mul;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}
ExprPtr Expr::neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::neg;
  e->lhs = std::move(a);
  return e;
}
ExprPtr Expr::pow(ExprPtr a, int k) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::pow;
  e->lhs = std::move(a);
  e->ipow = k;
  return e;
}
ExprPtr Expr::exp_of(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::exp_fn;
  e->lhs = std::move(a);
  return e;
}

double eval(const Expr& e, const Vec& x) {
  switch (e.kind) {
    case Expr::Kind::constant: return e.cval;
    case Expr::Kind::variable: return x[e.var];
    case Expr::Kind::add: return eval(*e.lhs, x) + eval(*e.rhs, x);
    case Expr::Kind::sub: return eval(*e.lhs, x) - eval(*e.rhs, x);
    case Expr::Kind::mul: return eval(*e.lhs, x) * eval(*e.rhs, x);
    case Expr::Kind::neg: return -eval(*e.lhs, x);
    case Expr::Kind::pow: return std::pow(eval(*e.lhs, x), e.ipow);
    case Expr::Kind::exp_fn: return std::exp(eval(*e.lhs, x));
  }
  fail(Err::internal, "eval: bad node");
}

Dual2 eval_dual(const Expr& e, const Vec& x) {
  const int m = static_cast<int>(x.size());
  switch (e.kind) {
    case Expr::Kind::constant: return Dual2::constant(m, e.cval);
    case Expr::Kind::variable: return Dual2::variable(m, e.var, x[e.var]);
    case Expr::Kind::add: return eval_dual(*e.lhs, x) + eval_dual(*e.rhs, x);
    case Expr::Kind::sub: return eval_dual(*e.lhs, x) - eval_dual(*e.rhs, x);
    case Expr::Kind::mul: return eval_dual(*e.lhs, x) * eval_dual(*e.rhs, x);
    case Expr::Kind::neg: return -eval_dual(*e.lhs, x);
    case Expr::Kind::pow: return pow_int(eval_dual(*e.lhs, x), e.ipow);
    case Expr::Kind::exp_fn: return exp(eval_dual(*e.lhs, x));
  }
  fail(Err::internal, "eval_dual: bad node");
}

Dual1 eval_dual1(const Expr& e, const Vec& x) {
  const int m = static_cast<int>(x.size());
  switch (e.kind) {
    case Expr::Kind::constant: return Dual1::constant(m, e.cval);
    case Expr::Kind::variable: return Dual1::variable(m, e.var, x[e.var]);
    case Expr::Kind::add: return eval_dual1(*e.lhs, x) + eval_dual1(*e.rhs, x);
    case Expr::Kind::sub: return eval_dual1(*e.lhs, x) - eval_dual1(*e.rhs, x);
    case Expr::Kind::mul: return eval_dual1(*e.lhs, x) * eval_dual1(*e.rhs, x);
    case Expr::Kind::neg: return -eval_dual1(*e.lhs, x);
    case Expr::Kind::pow: return pow_int(eval_dual1(*e.lhs, x), e.ipow);
    case Expr::Kind::exp_fn: return exp(eval_dual1(*e.lhs, x));
  }
  fail(Err::internal, "eval_dual1: bad node");
}

int max_variable(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::constant: return 0;
    case Expr::Kind::variable: return e.var + 1;
    case Expr::Kind::add:
    case Expr::Kind::sub:
    case Expr::Kind::mul:
      return std::max(max_variable(*e.lhs), max_variable(*e.rhs));
    case Expr::Kind::neg:
    case Expr::Kind::pow:
    case Expr::Kind::exp_fn:
      return max_variable(*e.lhs);
  }
  return 0;
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& src) : s_(src) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) err("trailing input");
    return e;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void err(const std::string& what) {
    std::ostringstream os;
    os << "expression parse error at offset " << pos_ << ": " << what;
    fail(Err::parse, os.str());
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (eat('+'))
        e = Expr::add(e, term());
      else if (eat('-'))
        e = Expr::sub(e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (eat('*')) e = Expr::mul(e, factor());
    return e;
  }

  ExprPtr factor() {
    ExprPtr e = atom();
    if (eat('^')) {
      skip_ws();
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == start) err("expected integer exponent after '^'");
      int k = std::stoi(s_.substr(start, pos_ - start));
      if (k > 16) err("exponent too large (max 16)");
      e = Expr::pow(e, k);
    }
    return e;
  }

  ExprPtr atom() {
    char c = peek();
    if (c == '(') {
      eat('(');
      ExprPtr e = expr();
      if (!eat(')')) err("expected ')'");
      return e;
    }
    if (c == '-') {
      eat('-');
      return Expr::neg(factor());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
              s_[pos_] == 'e' || s_[pos_] == 'E' ||
              ((s_[pos_] == '+' || s_[pos_] == '-') && pos_ > start &&
               (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
        ++pos_;
      try {
        return Expr::constant(std::stod(s_.substr(start, pos_ - start)));
      } catch (const std::exception&) {
        err("bad number literal");
      }
    }
    if (c == 'x') {
      eat('x');
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ == start) err("expected coordinate index after 'x'");
      int idx = std::stoi(s_.substr(start, pos_ - start));
      if (idx < 1 || idx > 16) err("coordinate index out of range (x1..x16)");
      return Expr::variable(idx - 1);
    }
    if (c == 'e' && s_.compare(pos_, 3, "exp") == 0) {
      pos_ += 3;
      if (!eat('(')) err("expected '(' after exp");
      ExprPtr e = expr();
      if (!eat(')')) err("expected ')'");
      return Expr::exp_of(e);
    }
    err("expected number, coordinate, exp(...) or '('");
  }
};

void print(const Expr& e, std::ostream& os) {
  switch (e.kind) {
    case Expr::Kind::constant: os << e.cval; return;
    case Expr::Kind::variable: os << 'x' << (e.var + 1); return;
    case Expr::Kind::add:
      os << '(';
      print(*e.lhs, os);
      os << " + ";
      print(*e.rhs, os);
      os << ')';
      return;
    case Expr::Kind::sub:
      os << '(';
      print(*e.lhs, os);
      os << " - ";
      print(*e.rhs, os);
      os << ')';
      return;
    case Expr::Kind::mul:
      os << '(';
      print(*e.lhs, os);
      os << " * ";
      print(*e.rhs, os);
      os << ')';
      return;
    case Expr::Kind::neg:
      os << "(-";
      print(*e.lhs, os);
      os << ')';
      return;
    case Expr::Kind::pow:
      print(*e.lhs, os);
      os << '^' << e.ipow;
      return;
    case Expr::Kind::exp_fn:
      os << "exp(";
      print(*e.lhs, os);
      os << ')';
      return;
  }
}

}  // namespace

ExprPtr parse_expression(const std::string& src) { return Parser(src).run(); }

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(e, os);
  return os.str();
}

}  // namespace dk
