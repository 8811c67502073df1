#pragma once

// Domains are given by a defining function r (expression tree) on a
// bounding box, with r < 0 inside and a nonvanishing gradient on the zero
// set. An optional C-affine pre-map (unitary + translation) composes the
// expression with z = U w + shift; derivatives then flow through the exact
// chain rule, so transformed domains keep machine-precision Hessians.

#include <optional>
#include <string>
#include <vector>

#include "deltakit/expr.hpp"
#include "deltakit/hessforms.hpp"

namespace dk {

struct BBox {
  Vec lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& x, double slack = 0.0) const {
    for (size_t i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    return true;
  }
  double min_halfwidth() const {
    double w = 1e300;
    for (size_t i = 0; i < lo.size(); ++i) w = std::min(w, 0.5 * (hi[i] - lo[i]));
    return w;
  }
};

struct AffineMap {  // z = U w + shift, U unitary on C^n
  CMat U;
  CVec shift;
  Mat J;   // real 2n x 2n form of U (orthogonal)
  Vec t;   // real form of shift

  Vec apply(const Vec& w) const { return vadd(matvec(J, w), t); }
  Vec apply_inverse(const Vec& z) const { return matvec(transpose(J), vsub(z, t)); }
};

struct Derivatives {
  double value = 0.0;
  Vec gradient;  // 2n
  Mat hessian;   // 2n x 2n
};

struct DomainSpec {
  std::string name;
  int n = 0;                 // complex dimension
  ExprPtr expr;              // defining function in base coordinates
  std::string expr_src;      // parseable source of expr
  BBox bbox;                 // box in working coordinates
  double shell_width = 0.0;  // default one-sided tube depth for sampling
  double scale = 1.0;        // curvature length scale (sets FD steps, offsets)
  std::optional<AffineMap> map;  // working -> base coordinates
  std::string params_json = "{}";

  int real_dim() const { return 2 * n; }
};

// ---- derivative engine --------------------------------------------------

// Exact value/gradient/Hessian of the defining function at x (working
// coordinates). Errors if x is outside the bounding box.
Derivatives eval_derivatives(const DomainSpec& spec, const Vec& x);

double eval_value(const DomainSpec& spec, const Vec& x);

// Unchecked variants for internal iterations (Newton steps, FD stencils)
// that may transiently leave the box; the expressions are globally smooth.
Derivatives eval_derivatives_unchecked(const DomainSpec& spec, const Vec& x);
double eval_value_unchecked(const DomainSpec& spec, const Vec& x);

struct ValueGrad {
  double value = 0.0;
  Vec gradient;
};
ValueGrad eval_gradient_unchecked(const DomainSpec& spec, const Vec& x);

HessianForms hessian_forms(const DomainSpec& spec, const Vec& x);

// f(p+W) - [f(p) + 2 Re<df(p),W> + Q(W,W) + L(W,W)]; the complex-notation
// second-order Taylor remainder, O(||W||^3) for smooth f.
double taylor_residual(const DomainSpec& spec, const Vec& p, const CVec& W);

// New spec with defining function r(U w + shift); U must be unitary.
DomainSpec unitary_transform(const DomainSpec& spec, const CMat& U, const CVec& shift);

// ---- catalog / spec files -----------------------------------------------

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::string params_doc;
};

const std::vector<CatalogEntry>& catalog();

// params_json may override the documented per-entry parameters.
DomainSpec make_catalog_domain(const std::string& name, const std::string& params_json = "{}");

// Spec file schema (JSON, schema_version 1):
//   { "schema_version": 1, "name": str, "n": int,
//     "expression": str | "catalog": str, "params": {...},
//     "bbox": [[lo,hi] x 2n], "shell_width": num, "scale": num }
DomainSpec parse_domain_spec_json(const std::string& json_text);
DomainSpec parse_domain_spec_file(const std::string& path);

std::string domain_info_json(const DomainSpec& spec, bool pretty = false);

// Construction-time validation: zero set nonempty in the box, gradient
// nonvanishing on the zero set (sampled). Throws on violation.
void validate_domain(const DomainSpec& spec);

}  // namespace dk
