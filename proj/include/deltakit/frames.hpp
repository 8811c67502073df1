#pragma once

// Tangent frames at boundary points, restricted positivity tests, the
// aperture cone inside the real tangent space, and the classification
// report (convex / pseudoconvex / C-convex / gamma-psh).
//
// Boundary values of the delta-Hessian are exact here: on the zero set,
// H_delta = P (H_r / |grad r|) P with P the projection off the normal.
// Both sides vanish against the normal and agree on tangent pairs, so the
// identity is pointwise exact and classification tolerances can sit at
// 1e-8 without finite-difference noise. The interior shell limit is kept
// as a cross-check (tested), not as the primary path.

#include "deltakit/distance.hpp"
#include "deltakit/domain.hpp"
#include "deltakit/hessforms.hpp"

namespace dk {

struct TangentFrame {
  Vec p;                        // boundary point
  Vec normal;                   // nu, outward unit
  Vec i_normal;                 // real form of i nu
  std::vector<CVec> ct_basis;   // complex tangent basis, n-1 vectors, Hermitian-orthonormal
  std::vector<Vec> rt_basis;    // real tangent basis, 2n-1 vectors: i nu then Re/Im pairs
  double defining_residual;     // max |<dr, E_j>| over the complex basis
  double gram_residual;         // max |gram - id|
};

TangentFrame tangent_frame(const DomainSpec& spec, const BoundaryPoint& p);

// Exact forms of delta at a boundary point (see note above).
HessianForms boundary_delta_forms(const DomainSpec& spec, const BoundaryPoint& p);

struct ConeSpec {
  double gamma = 0.0;
  double gamma_cap = 1e3;  // treated as "aperture infinity": the full real tangent
};

// |component along i nu| <= gamma * |complex-tangential component|.
// V must lie in the real tangent space (checked to 1e-8).
bool cone_membership(const TangentFrame& frame, const CVec& V, const ConeSpec& cone);

// Minimal eigenvalue of a form restricted to an orthonormal basis, by
// cyclic Jacobi on the reduced matrix.
double restricted_min_eig(const HessianForms& forms, FormKind which,
                          const std::vector<Vec>& real_basis);
double restricted_min_eig(const HessianForms& forms, FormKind which,
                          const std::vector<CVec>& complex_basis);

// Minimum of L(V,V) over unit V in the aperture cone. Slices the normal
// fraction s = <V, i nu> over `resolution` values, minimizes the
// quadratic-plus-linear slice objective exactly on the tangential sphere
// (secular equation), then refines the best slice by golden section.
// Accuracy O(resolution^-2); resolution >= 16. gamma at or above the cap
// reduces to the exact restricted eigenvalue on the real tangent space.
double cone_min(const HessianForms& delta_forms, const TangentFrame& frame, const ConeSpec& cone,
                int resolution = 48);

struct MaxGammaParams {
  double tol = 1e-10;     // relative semidefiniteness slack for the predicate
  double gamma_cap = 1e3;
  double probe = 1e-4;    // failing here resolves the result to exactly 0
  int max_iters = 60;
  double width_tol = 1e-6;
  int resolution = 48;
};

// Largest gamma in [0, cap] with cone_min >= -tol (cones are nested, so
// the predicate is monotone and bisection is valid).
double max_gamma(const DomainSpec& spec, const BoundaryPoint& p, const MaxGammaParams& mp = {});

struct PositivityReport {
  Vec p;
  double min_eig_L_CT = 0.0;   // Levi form on the complex tangent
  double min_eig_H_RT = 0.0;   // real Hessian on the real tangent
  double min_eig_H_CT = 0.0;   // real Hessian on the complex tangent
  double min_eig_L_RT = 0.0;   // Levi form on the real tangent (aperture cap)
  double cone_min_at_query = 0.0;
  double gamma_query = 0.0;
  double max_gamma = 0.0;
  double eta = 0.0;            // 1 - 2/(2 + max_gamma^2)
  bool convex = false;
  bool pseudoconvex = false;
  bool c_convex = false;
  bool gamma_psh = false;      // at gamma_query
  double tol_used = 0.0;
};

struct ClassifyParams {
  double eps = 1e-8;  // relative: tol = eps * (1 + |form|)
  int resolution = 48;
  MaxGammaParams gamma_params;
};

PositivityReport classify_boundary(const DomainSpec& spec, const BoundaryPoint& p,
                                   double gamma_query, const ClassifyParams& cp = {});

}  // namespace dk
