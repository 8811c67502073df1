#pragma once

// Signed distance delta to the zero set, the closest-point projection b,
// and second-order data of delta and D = delta^2 on the tubular shell.
//
// The projection solves the first-order conditions r(q) = 0,
// q - z + lambda grad r(q) = 0 by Newton iteration with deterministic
// multistart; ambiguous projections (two minimizers at equal distance)
// are an explicit error. delta's Hessian is formed by central differences
// of the analytically transported normal field, never of delta itself, so
// only one differentiation level carries noise.

#include "deltakit/domain.hpp"
#include "deltakit/hessforms.hpp"

namespace dk {

struct ProjectionParams {
  double kkt_tol = 1e-12;
  int max_newton_iters = 50;
  int multistart_seeds = 32;
  uint64_t seed = 0x5EED0DDB175ULL;  // per-call stream; fixed for reproducibility
  double ambiguity_tol = 1e-8;       // distance tie threshold
};

struct BoundaryPoint {
  Vec q;            // point on the zero set
  Vec normal;       // outward unit normal = grad r / |grad r|
  double residual;  // |r(q)|
  int newton_iters;
};

BoundaryPoint project_to_boundary(const DomainSpec& spec, const Vec& z,
                                  const ProjectionParams& pp = {});

double signed_distance(const DomainSpec& spec, const Vec& z, const ProjectionParams& pp = {});

// grad delta(z) = outward normal at b(z); unit by construction.
Vec delta_gradient(const DomainSpec& spec, const Vec& z, const ProjectionParams& pp = {});

// Central differences of delta_gradient, symmetrized. Checks the normal
// annihilation H_delta * grad delta ~ 0 and errors if it fails badly.
// `center`, when given, must be the projection of z (skips recomputing it).
HessianForms delta_hessian(const DomainSpec& spec, const Vec& z, const ProjectionParams& pp = {},
                           const BoundaryPoint* center = nullptr);

struct ShellSample {
  Vec z;
  BoundaryPoint boundary;
  double delta;
  Vec grad_delta;
  HessianForms forms_delta;
};

ShellSample shell_sample(const DomainSpec& spec, const Vec& z, const ProjectionParams& pp = {});

struct DForms {
  double delta = 0.0;
  double D = 0.0;        // delta^2
  Vec grad_delta;        // unit normal
  Vec grad_D;            // 2 delta grad delta
  HessianForms f_delta;  // forms of delta at z
  HessianForms f_D;      // forms of D at z, chain-rule assembled
};

// D = delta^2 with H_D = 2 grad_delta grad_delta^T + 2 delta H_delta.
// Errors with Err::singular when z lies on the zero set.
DForms d_forms(const DomainSpec& spec, const Vec& z, const ProjectionParams& pp = {},
               const BoundaryPoint* center = nullptr);

struct AdaptedFrame {
  Vec base;               // boundary point p = b(q), maps to 0
  CMat U;                 // unitary: new coords u satisfy  z = U u + p
  CVec shift;             // = complex form of p
  DomainSpec transformed; // spec in adapted coordinates
  double residual_gradient;  // max |d delta/d y_j - delta_{j,2n-1}| along the normal
  double residual_distance;  // |delta(q) - a|
};

// C-affine chart at b(q): boundary point to 0, interior point q to
// (0', a) with a = delta(q) < 0, real tangent = {Re z_n = 0}.
AdaptedFrame adapted_frame(const DomainSpec& spec, const Vec& q_interior,
                           const ProjectionParams& pp = {});

// Largest |delta| accepted by projection-based operations. The scale is
// the minimal curvature radius, which bounds the reach of the boundary;
// staying a little inside it keeps projections unique. The extra slack
// keeps FD stencils around points at the nominal depth valid.
inline double tube_guard(const DomainSpec& spec) {
  return std::max(spec.shell_width, 0.95 * spec.scale) + 2e-3 * std::max(spec.scale, 0.5);
}

// Step for differencing the normal field; clamped so stencils stay in the box.
double hessian_fd_step(const DomainSpec& spec, const Vec& z);

}  // namespace dk
