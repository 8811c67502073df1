#include "deltakit/distance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "deltakit/rng.hpp"

namespace dk {

namespace {

struct Candidate {
  Vec q;
  double dist;
  int iters;
};

// First-order walk onto the zero set; returns false if it leaves the box
// or stalls on a vanishing gradient.
bool flow_to_zero_set(const DomainSpec& spec, Vec& x, double tol) {
  for (int it = 0; it < 40; ++it) {
    ValueGrad d = eval_gradient_unchecked(spec, x);
    if (std::fabs(d.value) <= tol) return true;
    double g2 = dot(d.gradient, d.gradient);
    if (g2 < 1e-18) return false;
    Vec xn = vadd(x, scaled(d.gradient, -d.value / g2));
    if (!spec.bbox.contains(xn, 1e-12)) return false;
    x = xn;
  }
  ValueGrad d = eval_gradient_unchecked(spec, x);
  return std::fabs(d.value) <= 1e3 * tol;
}

// Newton on F(q, lambda) = [q - z + lambda grad r(q); r(q)].
bool newton_kkt(const DomainSpec& spec, const Vec& z, Vec q, double scale, Candidate& out,
                const ProjectionParams& pp) {
  const int m = static_cast<int>(z.size());
  Derivatives d = eval_derivatives_unchecked(spec, q);
  double g2 = dot(d.gradient, d.gradient);
  if (g2 < 1e-18) return false;
  double lambda = dot(vsub(z, q), d.gradient) / g2;

  const double ftol = pp.kkt_tol * (1.0 + scale);
  for (int it = 0; it < pp.max_newton_iters; ++it) {
    Vec F(m + 1, 0.0);
    double fmax = 0.0;
    for (int i = 0; i < m; ++i) {
      F[i] = q[i] - z[i] + lambda * d.gradient[i];
      fmax = std::max(fmax, std::fabs(F[i]));
    }
    F[m] = d.value;
    fmax = std::max(fmax, std::fabs(d.value));
    if (fmax <= ftol) {
      out.q = q;
      out.dist = norm2(vsub(z, q));
      out.iters = it;
      return true;
    }
    Mat Jac(m + 1, m + 1);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) Jac(i, j) = lambda * d.hessian(i, j) + (i == j ? 1.0 : 0.0);
      Jac(i, m) = d.gradient[i];
      Jac(m, i) = d.gradient[i];
    }
    Jac(m, m) = 0.0;
    Vec step;
    try {
      for (double& f : F) f = -f;
      step = solve_linear(Jac, F);
    } catch (const Error&) {
      return false;
    }
    // dampen wild steps; the quadratic basin is small for strong curvature
    double slen = norm2(Vec(step.begin(), step.begin() + m));
    double cap = 0.5 * (1.0 + scale);
    double damp = slen > cap ? cap / slen : 1.0;
    for (int i = 0; i < m; ++i) q[i] += damp * step[i];
    lambda += damp * step[m];
    if (!spec.bbox.contains(q, 0.05 * (1.0 + scale))) return false;
    d = eval_derivatives_unchecked(spec, q);
  }
  return false;
}

BoundaryPoint finish_candidate(const DomainSpec& spec, const Candidate& best, double zero_tol) {
  Derivatives d = eval_derivatives_unchecked(spec, best.q);
  double gn = norm2(d.gradient);
  if (gn < 1e-14) fail(Err::convergence, "vanishing gradient at projected point");
  BoundaryPoint bp;
  bp.q = best.q;
  bp.normal = scaled(d.gradient, 1.0 / gn);
  bp.residual = std::fabs(d.value);
  bp.newton_iters = best.iters;
  if (bp.residual > zero_tol * 10.0)
    fail(Err::convergence, "projected point does not satisfy r(q) = 0 to tolerance");
  return bp;
}

// Warm projection for points a known small step away from an anchored
// projection. The triangle inequality |delta(z') - delta(z)| <= |z' - z|
// validates the result; anything outside that window falls back to the
// full multistart path.
BoundaryPoint project_near(const DomainSpec& spec, const Vec& z, const BoundaryPoint& anchor,
                           double anchor_dist, double step, const ProjectionParams& pp) {
  Candidate c;
  if (newton_kkt(spec, z, anchor.q, spec.scale, c, pp)) {
    const double slack = 1e-12 * (1.0 + spec.scale) + 1e-9 * step;
    if (std::fabs(c.dist - anchor_dist) <= step + slack)
      return finish_candidate(spec, c, 1e-12 * (1.0 + spec.scale));
  }
  return project_to_boundary(spec, z, pp);
}

}  // namespace

BoundaryPoint project_to_boundary(const DomainSpec& spec, const Vec& z,
                                  const ProjectionParams& pp) {
  if (static_cast<int>(z.size()) != spec.real_dim())
    fail(Err::argument, "project_to_boundary: wrong point dimension");
  if (!spec.bbox.contains(z, 1e-9 * (1.0 + spec.scale)))
    fail(Err::domain, "project_to_boundary: point outside bounding box");

  const double scale = spec.scale;
  const double zero_tol = 1e-12 * (1.0 + scale);
  std::vector<Candidate> cands;

  auto try_start = [&](Vec x) {
    if (!flow_to_zero_set(spec, x, 1e-10 * (1.0 + scale))) return;
    Candidate c;
    if (newton_kkt(spec, z, x, scale, c, pp)) {
      for (const Candidate& prev : cands)
        if (norm2(vsub(prev.q, c.q)) <= 1e-7 * (1.0 + scale)) return;  // duplicate
      cands.push_back(std::move(c));
    }
  };

  try_start(z);
  Rng rng(pp.seed);
  for (int s = 0; s < pp.multistart_seeds; ++s)
    try_start(rng.point_in_box(spec.bbox.lo, spec.bbox.hi));

  if (cands.empty())
    fail(Err::convergence,
         "projection Newton did not converge from any start ('" + spec.name + "')");

  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });
  if (cands.size() >= 2 &&
      cands[1].dist - cands[0].dist <= pp.ambiguity_tol * (1.0 + cands[0].dist)) {
    std::ostringstream os;
    os << "ambiguous projection: two boundary points at distances " << cands[0].dist << " and "
       << cands[1].dist << " (point is outside the tubular neighborhood)";
    fail(Err::ambiguity, os.str());
  }

  const Candidate& best = cands.front();
  if (best.dist > tube_guard(spec))
    fail(Err::domain, "point lies deeper than the valid tube around the boundary");
  return finish_candidate(spec, best, zero_tol);
}

double signed_distance(const DomainSpec& spec, const Vec& z, const ProjectionParams& pp) {
  BoundaryPoint bp = project_to_boundary(spec, z, pp);
  double d = norm2(vsub(z, bp.q));
  double r = eval_value_unchecked(spec, z);
  return r < 0.0 ? -d : d;
}

Vec delta_gradient(const DomainSpec& spec, const Vec& z, const ProjectionParams& pp) {
  return project_to_boundary(spec, z, pp).normal;
}

double hessian_fd_step(const DomainSpec& spec, const Vec& z) {
  // noise floor of the transported normal is ~1e-12, so steps below ~1e-6
  // trade truncation error for noise; clamp into the box
  double h = 1e-5 * std::max(spec.scale, 0.5);
  for (size_t i = 0; i < z.size(); ++i) {
    double room = std::min(z[i] - spec.bbox.lo[i], spec.bbox.hi[i] - z[i]);
    h = std::min(h, std::max(room * 0.9, 1e-9));
  }
  return h;
}

HessianForms delta_hessian(const DomainSpec& spec, const Vec& z, const ProjectionParams& pp,
                           const BoundaryPoint* center_in) {
  const int m = spec.real_dim();
  const double h = hessian_fd_step(spec, z);

  BoundaryPoint center = center_in ? *center_in : project_to_boundary(spec, z, pp);
  const double center_dist = norm2(vsub(z, center.q));

  Mat H(m, m);
  for (int j = 0; j < m; ++j) {
    Vec zp = z, zm = z;
    zp[j] += h;
    zm[j] -= h;
    Vec gp = project_near(spec, zp, center, center_dist, h, pp).normal;
    Vec gm = project_near(spec, zm, center, center_dist, h, pp).normal;
    for (int i = 0; i < m; ++i) H(i, j) = (gp[i] - gm[i]) / (2.0 * h);
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double s = 0.5 * (H(i, j) + H(j, i));
      H(i, j) = H(j, i) = s;
    }

  Vec Hnu = matvec(H, center.normal);
  double worst = 0.0;
  for (double v : Hnu) worst = std::max(worst, std::fabs(v));
  double hnorm = max_abs(H);
  if (worst > 1e-4 * (1.0 + hnorm))
    fail(Err::accuracy,
         "delta Hessian failed the normal-annihilation check (projection unreliable here)");
  return assemble_forms(H, z, spec.name + ":delta");
}

ShellSample shell_sample(const DomainSpec& spec, const Vec& z, const ProjectionParams& pp) {
  ShellSample s;
  s.z = z;
  s.boundary = project_to_boundary(spec, z, pp);
  double d = norm2(vsub(z, s.boundary.q));
  s.delta = eval_value_unchecked(spec, z) < 0.0 ? -d : d;
  s.grad_delta = s.boundary.normal;
  s.forms_delta = delta_hessian(spec, z, pp);
  return s;
}

DForms d_forms(const DomainSpec& spec, const Vec& z, const ProjectionParams& pp,
               const BoundaryPoint* center_in) {
  DForms out;
  BoundaryPoint bp = center_in ? *center_in : project_to_boundary(spec, z, pp);
  out.f_delta = delta_hessian(spec, z, pp, &bp);
  double d = norm2(vsub(z, bp.q));
  out.delta = eval_value_unchecked(spec, z) < 0.0 ? -d : d;
  if (out.delta == 0.0) fail(Err::singular, "D-forms undefined on the zero set (delta = 0)");
  out.D = out.delta * out.delta;
  out.grad_delta = bp.normal;
  out.grad_D = scaled(bp.normal, 2.0 * out.delta);

  const int m = spec.real_dim();
  Mat HD(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      HD(i, j) =
          2.0 * out.grad_delta[i] * out.grad_delta[j] + 2.0 * out.delta * out.f_delta.H(i, j);
  out.f_D = assemble_forms(HD, z, spec.name + ":D");
  return out;
}

AdaptedFrame adapted_frame(const DomainSpec& spec, const Vec& q_interior,
                           const ProjectionParams& pp) {
  const int n = spec.n;
  BoundaryPoint bp = project_to_boundary(spec, q_interior, pp);
  double dist = norm2(vsub(q_interior, bp.q));
  double a = eval_value_unchecked(spec, q_interior) < 0.0 ? -dist : dist;

  // unitary with the normal as last column: columns = complex tangent
  // basis then nu; new coords u give z = U u + p
  CVec nu_c = to_complex(bp.normal);
  std::vector<CVec> cols;
  std::vector<CVec> seed;
  seed.push_back(nu_c);
  for (int j = 0; j < n; ++j) {
    CVec e(n, cplx(0.0));
    e[j] = 1.0;
    seed.push_back(e);
  }
  std::vector<CVec> onb = orthonormalize(seed);
  if (static_cast<int>(onb.size()) != n)
    fail(Err::internal, "adapted_frame: failed to complete unitary basis");
  for (int j = 1; j < n; ++j) cols.push_back(onb[j]);
  cols.push_back(nu_c);

  CMat U(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) U(i, j) = cols[j][i];

  AdaptedFrame fr;
  fr.base = bp.q;
  fr.U = U;
  fr.shift = to_complex(bp.q);
  fr.transformed = unitary_transform(spec, U, fr.shift);

  // verify: along the inward normal the transformed delta has gradient
  // e_{2n-1} and value t
  double worst_g = 0.0, worst_d = 0.0;
  for (double t : {0.25 * a, 0.5 * a, a}) {
    Vec u(2 * n, 0.0);
    u[2 * n - 2] = t;  // new coords: (0', t) on the normal line
    Vec g = delta_gradient(fr.transformed, u, pp);
    for (int i = 0; i < 2 * n; ++i)
      worst_g = std::max(worst_g, std::fabs(g[i] - (i == 2 * n - 2 ? 1.0 : 0.0)));
    double dd = signed_distance(fr.transformed, u, pp);
    worst_d = std::max(worst_d, std::fabs(dd - t));
  }
  fr.residual_gradient = worst_g;
  fr.residual_distance = worst_d;
  return fr;
}

}  // namespace dk
