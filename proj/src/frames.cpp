#include "deltakit/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dk {

TangentFrame tangent_frame(const DomainSpec& spec, const BoundaryPoint& p) {
  const int n = spec.n;
  Derivatives d = eval_derivatives_unchecked(spec, p.q);
  double gn = norm2(d.gradient);
  if (gn < 1e-14) fail(Err::argument, "tangent_frame: degenerate gradient at boundary point");

  TangentFrame fr;
  fr.p = p.q;
  fr.normal = scaled(d.gradient, 1.0 / gn);
  fr.i_normal = times_i(fr.normal);

  // complex tangent = Hermitian-orthogonal complement of nu_c in C^n
  CVec nu_c = to_complex(fr.normal);
  std::vector<CVec> seed;
  seed.push_back(nu_c);
  for (int j = 0; j < n; ++j) {
    CVec e(n, cplx(0.0));
    e[j] = 1.0;
    seed.push_back(e);
  }
  std::vector<CVec> onb = orthonormalize(seed);
  if (static_cast<int>(onb.size()) != n)
    fail(Err::internal, "tangent_frame: basis completion failed");
  fr.ct_basis.assign(onb.begin() + 1, onb.end());

  fr.rt_basis.clear();
  fr.rt_basis.push_back(fr.i_normal);
  for (const CVec& E : fr.ct_basis) {
    fr.rt_basis.push_back(to_real(E));
    fr.rt_basis.push_back(to_real(times_i(E)));
  }

  // residuals of the defining relations and of orthonormality
  CVec dr = complex_gradient(d.gradient);
  double worst = 0.0;
  for (const CVec& E : fr.ct_basis) worst = std::max(worst, std::abs(bdot(dr, E)) / gn);
  for (const Vec& w : fr.rt_basis) worst = std::max(worst, std::fabs(dot(d.gradient, w)) / gn);
  fr.defining_residual = worst;

  double gram = 0.0;
  for (size_t i = 0; i < fr.rt_basis.size(); ++i)
    for (size_t j = 0; j < fr.rt_basis.size(); ++j) {
      double g = dot(fr.rt_basis[i], fr.rt_basis[j]) - (i == j ? 1.0 : 0.0);
      gram = std::max(gram, std::fabs(g));
    }
  fr.gram_residual = gram;
  return fr;
}

HessianForms boundary_delta_forms(const DomainSpec& spec, const BoundaryPoint& p) {
  Derivatives d = eval_derivatives_unchecked(spec, p.q);
  double gn = norm2(d.gradient);
  if (gn < 1e-14) fail(Err::argument, "boundary_delta_forms: degenerate gradient");
  Vec nu = scaled(d.gradient, 1.0 / gn);
  const int m = spec.real_dim();
  // P (H_r / |grad r|) P with P = I - nu nu^T
  Mat Hn(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) Hn(i, j) = d.hessian(i, j) / gn;
  Vec Hnu = matvec(Hn, nu);
  double nuHnu = dot(nu, Hnu);
  Mat Hd(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      Hd(i, j) = Hn(i, j) - nu[i] * Hnu[j] - Hnu[i] * nu[j] + nuHnu * nu[i] * nu[j];
  return assemble_forms(Hd, p.q, spec.name + ":delta|b");
}

bool cone_membership(const TangentFrame& frame, const CVec& V, const ConeSpec& cone) {
  if (V.size() != to_complex(frame.normal).size())
    fail(Err::argument, "cone_membership: dimension mismatch");
  Vec v = to_real(V);
  double vn = norm2(v);
  double normal_part = dot(v, frame.normal);
  if (std::fabs(normal_part) > 1e-8 * (1.0 + vn))
    fail(Err::argument, "cone_membership: V has a component along the normal");
  if (cone.gamma >= cone.gamma_cap) return true;  // aperture cap: the whole real tangent
  double c = dot(v, frame.i_normal);
  Vec tang = v;
  axpy(-c, frame.i_normal, tang);
  return std::fabs(c) <= cone.gamma * norm2(tang) + 1e-14 * (1.0 + vn);
}

namespace {

Mat reduce_real(const Mat& M, const std::vector<Vec>& basis) {
  const int k = static_cast<int>(basis.size());
  Mat G(k, k);
  for (int i = 0; i < k; ++i) {
    Vec Mi = matvec(M, basis[i]);
    for (int j = 0; j < k; ++j) G(j, i) = dot(basis[j], Mi);
  }
  return G;
}

void check_orthonormal(const std::vector<Vec>& basis) {
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = i; j < basis.size(); ++j) {
      double g = dot(basis[i], basis[j]) - (i == j ? 1.0 : 0.0);
      if (std::fabs(g) > 1e-8) fail(Err::argument, "restricted_min_eig: basis not orthonormal");
    }
}

}  // namespace

double restricted_min_eig(const HessianForms& forms, FormKind which,
                          const std::vector<Vec>& real_basis) {
  if (real_basis.empty()) fail(Err::argument, "restricted_min_eig: empty basis");
  check_orthonormal(real_basis);
  if (which == FormKind::H) return jacobi_eigen(reduce_real(forms.H, real_basis)).values[0];
  if (which == FormKind::L)
    return jacobi_eigen(reduce_real(levi_real_matrix(forms.H), real_basis)).values[0];
  fail(Err::argument, "restricted_min_eig: only H and L are supported");
}

double restricted_min_eig(const HessianForms& forms, FormKind which,
                          const std::vector<CVec>& complex_basis) {
  if (which != FormKind::L)
    fail(Err::argument, "restricted_min_eig: complex basis applies to the Levi form");
  if (complex_basis.empty()) fail(Err::argument, "restricted_min_eig: empty basis");
  const int k = static_cast<int>(complex_basis.size());
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      cplx g = hdot(complex_basis[i], complex_basis[j]) - (i == j ? cplx(1.0) : cplx(0.0));
      if (std::abs(g) > 1e-8) fail(Err::argument, "restricted_min_eig: basis not orthonormal");
    }
  CMat G(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      G(i, j) = apply_form(forms, FormKind::L, complex_basis[i], complex_basis[j]);
  return jacobi_eigen(hermitian_real_embedding(G)).values[0];
}

namespace {

// Reduced data for the cone slice problem at a boundary point:
//   objective(s, T) = (1-s^2) A(T,T) + 2 s sqrt(1-s^2) Re b(T) + s^2 Luu
// over unit T in the complex tangent, with A the reduced Levi form,
// b_j = L(E_j, i nu) and Luu = L(i nu, i nu).
struct SliceData {
  Mat A_emb;    // real embedding of the reduced Levi form, 2(n-1)
  Vec b_emb;    // embedding of the linear coefficient
  double Luu = 0.0;
  int tdim = 0;  // 2(n-1)
};

SliceData make_slice_data(const HessianForms& f, const TangentFrame& frame) {
  SliceData sd;
  const int k = static_cast<int>(frame.ct_basis.size());
  sd.tdim = 2 * k;
  CVec u = to_complex(frame.i_normal);
  CMat A(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      A(i, j) = apply_form(f, FormKind::L, frame.ct_basis[i], frame.ct_basis[j]);
  sd.A_emb = hermitian_real_embedding(A);
  sd.b_emb.assign(2 * k, 0.0);
  for (int j = 0; j < k; ++j) {
    cplx bj = apply_form(f, FormKind::L, frame.ct_basis[j], u);
    // Re(sum c_j b_j) for T = sum c_j E_j, with c_j = x_{2j} + i x_{2j+1}
    sd.b_emb[2 * j] = std::real(bj);
    sd.b_emb[2 * j + 1] = -std::imag(bj);
  }
  sd.Luu = std::real(apply_form(f, FormKind::L, u, u));
  return sd;
}

double slice_min(const SliceData& sd, double s) {
  double c2 = std::max(0.0, 1.0 - s * s);
  double c = std::sqrt(c2);
  if (sd.tdim == 0) return s * s * sd.Luu;  // n = 1: no tangential directions
  Mat A = sd.A_emb;
  for (double& v : A.a) v *= c2;
  Vec b = sd.b_emb;
  for (double& v : b) v *= s * c;
  SphereMin sm = minimize_quadratic_on_sphere(A, b);
  return sm.value + s * s * sd.Luu;
}

}  // namespace

double cone_min(const HessianForms& delta_forms, const TangentFrame& frame, const ConeSpec& cone,
                int resolution) {
  if (resolution < 16) fail(Err::argument, "cone_min: resolution must be >= 16");
  if (cone.gamma < 0.0) fail(Err::argument, "cone_min: gamma must be nonnegative");

  if (cone.gamma >= cone.gamma_cap)  // full real tangent, exact reduction
    return restricted_min_eig(delta_forms, FormKind::L, frame.rt_basis);

  SliceData sd = make_slice_data(delta_forms, frame);
  if (sd.tdim == 0) {
    // n = 1: the cone contains no unit vectors below the cap
    return std::numeric_limits<double>::infinity();
  }
  const double g = cone.gamma;
  const double smax = g / std::sqrt(1.0 + g * g);
  if (smax == 0.0) return slice_min(sd, 0.0);

  int best = 0;
  double best_val = 1e300;
  Vec svals(resolution);
  for (int i = 0; i < resolution; ++i) {
    double s = -smax + (2.0 * smax) * i / (resolution - 1);
    svals[i] = s;
    double v = slice_min(sd, s);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  // golden-section refine around the best slice
  double lo = svals[std::max(0, best - 1)];
  double hi = svals[std::min(resolution - 1, best + 1)];
  const double gr = 0.6180339887498949;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = slice_min(sd, x1), f2 = slice_min(sd, x2);
  for (int it = 0; it < 90 && (hi - lo) > 1e-13; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = slice_min(sd, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = slice_min(sd, x2);
    }
  }
  return std::min(best_val, std::min(f1, f2));
}

double max_gamma(const DomainSpec& spec, const BoundaryPoint& p, const MaxGammaParams& mp) {
  if (!(mp.tol > 0.0)) fail(Err::argument, "max_gamma: tol must be positive");
  HessianForms f = boundary_delta_forms(spec, p);
  TangentFrame frame = tangent_frame(spec, p);
  const double tol_abs = mp.tol * (1.0 + spectral_norm(f.L));

  auto nonneg = [&](double g) {
    ConeSpec cone{g, mp.gamma_cap};
    double v = cone_min(f, frame, cone, mp.resolution);
    return v >= -tol_abs;
  };

  if (nonneg(mp.gamma_cap)) return mp.gamma_cap;
  if (!nonneg(mp.probe)) return 0.0;
  double lo = mp.probe, hi = mp.gamma_cap;
  for (int it = 0; it < mp.max_iters && (hi - lo) > mp.width_tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (nonneg(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

PositivityReport classify_boundary(const DomainSpec& spec, const BoundaryPoint& p,
                                   double gamma_query, const ClassifyParams& cp) {
  HessianForms f = boundary_delta_forms(spec, p);
  TangentFrame frame = tangent_frame(spec, p);

  PositivityReport rep;
  rep.p = p.q;
  rep.gamma_query = gamma_query;

  std::vector<Vec> ct_real;
  for (const CVec& E : frame.ct_basis) {
    ct_real.push_back(to_real(E));
    ct_real.push_back(to_real(times_i(E)));
  }

  rep.min_eig_H_RT = restricted_min_eig(f, FormKind::H, frame.rt_basis);
  rep.min_eig_L_RT = restricted_min_eig(f, FormKind::L, frame.rt_basis);
  if (!frame.ct_basis.empty()) {
    rep.min_eig_L_CT = restricted_min_eig(f, FormKind::L, frame.ct_basis);
    rep.min_eig_H_CT = restricted_min_eig(f, FormKind::H, ct_real);
  }

  ConeSpec cone{gamma_query, cp.gamma_params.gamma_cap};
  rep.cone_min_at_query = cone_min(f, frame, cone, cp.resolution);
  MaxGammaParams mp = cp.gamma_params;
  mp.resolution = cp.resolution;
  rep.max_gamma = max_gamma(spec, p, mp);
  rep.eta = 1.0 - 2.0 / (2.0 + rep.max_gamma * rep.max_gamma);

  const double tol = cp.eps * (1.0 + spectral_norm(f.H));
  rep.tol_used = tol;
  rep.convex = rep.min_eig_H_RT >= -tol;
  rep.pseudoconvex = frame.ct_basis.empty() || rep.min_eig_L_CT >= -tol;
  rep.c_convex = frame.ct_basis.empty() || rep.min_eig_H_CT >= -tol;
  rep.gamma_psh = rep.cone_min_at_query >= -tol;
  return rep;
}

}  // namespace dk
