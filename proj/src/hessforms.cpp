#include "deltakit/hessforms.hpp"

namespace dk {

HessianForms assemble_forms(const Mat& H, const Vec& base_point, std::string source) {
  const int n = H.rows / 2;
  HessianForms f;
  f.n = n;
  f.base_point = base_point;
  f.source = std::move(source);
  f.H = H;
  f.L = CMat(n, n);
  f.Q = CMat(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      const double a = H(2 * k, 2 * l);
      const double b = H(2 * k, 2 * l + 1);
      const double c = H(2 * k + 1, 2 * l);
      const double d = H(2 * k + 1, 2 * l + 1);
      f.L(k, l) = 0.25 * cplx(a + d, b - c);
      f.Q(k, l) = 0.25 * cplx(a - d, -(b + c));
    }
  }
  return f;
}

cplx apply_form(const HessianForms& f, FormKind which, const CVec& A, const CVec& B) {
  if (static_cast<int>(A.size()) != f.n || static_cast<int>(B.size()) != f.n)
    fail(Err::argument, "apply_form: dimension mismatch");
  cplx q(0.0), l(0.0);
  for (int k = 0; k < f.n; ++k)
    for (int j = 0; j < f.n; ++j) {
      if (which != FormKind::L) q += f.Q(k, j) * A[k] * B[j];
      if (which != FormKind::Q) l += f.L(k, j) * A[k] * std::conj(B[j]);
    }
  switch (which) {
    case FormKind::L: return l;
    case FormKind::Q: return cplx(std::real(q), 0.0);
    case FormKind::H: return 2.0 * std::real(q) + 2.0 * l;
  }
  fail(Err::internal, "apply_form: bad kind");
}

cplx four_levi_residual(const HessianForms& f, const CVec& A, const CVec& B) {
  const CVec iA = times_i(A), iB = times_i(B);
  return apply_form(f, FormKind::H, A, B) + apply_form(f, FormKind::H, iA, iB) -
         4.0 * apply_form(f, FormKind::L, A, B);
}

CVec complex_gradient(const Vec& grad) {
  CVec d(grad.size() / 2);
  for (size_t k = 0; k < d.size(); ++k) d[k] = 0.5 * cplx(grad[2 * k], -grad[2 * k + 1]);
  return d;
}

cplx complex_pairing(const Vec& grad, const CVec& V) {
  CVec d = complex_gradient(grad);
  return bdot(d, V);
}

Mat levi_real_matrix(const Mat& H) {
  const int m = H.rows;
  Mat L(m, m);
  // (J v) pairs (a,b) -> (-b,a); fold J^T H J entrywise instead of forming J
  auto jidx = [](int i) { return (i % 2 == 0) ? i + 1 : i - 1; };
  auto jsgn = [](int i) { return (i % 2 == 0) ? -1.0 : 1.0; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double hij = H(i, j);
      double hJ = jsgn(i) * jsgn(j) * H(jidx(i), jidx(j));
      L(i, j) = 0.25 * (hij + hJ);
    }
  return L;
}

}  // namespace dk
