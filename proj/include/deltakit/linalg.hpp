#pragma once

// Small dense linear algebra for dimensions up to 2n+1 with n <= 8.
// Everything is deterministic (fixed sweep orders, no randomized
// algorithms), so results are bit-stable across runs and thread counts.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "deltakit/errors.hpp"

namespace dk {

using cplx = std::complex<double>;
using Vec = std::vector<double>;
using CVec = std::vector<cplx>;

struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static Mat identity(int m) {
    Mat I(m, m);
    for (int i = 0; i < m; ++i) I(i, i) = 1.0;
    return I;
  }
};

struct CMat {
  int rows = 0, cols = 0;
  std::vector<cplx> a;

  CMat() = default;
  CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, cplx(0.0)) {}
  cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  cplx operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static CMat identity(int m) {
    CMat I(m, m);
    for (int i = 0; i < m; ++i) I(i, i) = cplx(1.0);
    return I;
  }
};

// ---- basic vector ops -------------------------------------------------

inline double dot(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline cplx hdot(const CVec& x, const CVec& y) {  // sum x_k * conj(y_k)
  cplx s(0.0);
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

inline cplx bdot(const CVec& x, const CVec& y) {  // bilinear sum x_k * y_k
  cplx s(0.0);
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

inline double norm2(const CVec& x) { return std::sqrt(std::real(hdot(x, x))); }

inline void scale(Vec& x, double s) {
  for (double& v : x) v *= s;
}

inline Vec scaled(Vec x, double s) {
  scale(x, s);
  return x;
}

inline void axpy(double alpha, const Vec& x, Vec& y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline Vec vsub(const Vec& x, const Vec& y) {
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

inline Vec vadd(const Vec& x, const Vec& y) {
  Vec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

inline Vec matvec(const Mat& A, const Vec& x) {
  Vec y(A.rows, 0.0);
  for (int i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < A.cols; ++j) s += A(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline Mat matmul(const Mat& A, const Mat& B) {
  Mat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      double aik = A(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
    }
  return C;
}

inline Mat transpose(const Mat& A) {
  Mat T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
  return T;
}

inline double frob_norm(const Mat& A) {
  double s = 0.0;
  for (double v : A.a) s += v * v;
  return std::sqrt(s);
}

inline double frob_norm(const CMat& A) {
  double s = 0.0;
  for (const cplx& v : A.a) s += std::norm(v);
  return std::sqrt(s);
}

inline double max_abs(const Mat& A) {
  double m = 0.0;
  for (double v : A.a) m = std::max(m, std::fabs(v));
  return m;
}

// ---- R^{2n} <-> C^n identification ------------------------------------
// z_k = x_{2k-1} + i x_{2k} (1-based), so complex slot k uses real
// indices 2k-2 and 2k-1 (0-based).

inline CVec to_complex(const Vec& v) {
  CVec z(v.size() / 2);
  for (size_t k = 0; k < z.size(); ++k) z[k] = cplx(v[2 * k], v[2 * k + 1]);
  return z;
}

inline Vec to_real(const CVec& z) {
  Vec v(2 * z.size());
  for (size_t k = 0; k < z.size(); ++k) {
    v[2 * k] = std::real(z[k]);
    v[2 * k + 1] = std::imag(z[k]);
  }
  return v;
}

// Real form of i*V: per pair (a, b) -> (-b, a).
inline Vec times_i(const Vec& v) {
  Vec w(v.size());
  for (size_t k = 0; k + 1 < v.size(); k += 2) {
    w[k] = -v[k + 1];
    w[k + 1] = v[k];
  }
  return w;
}

inline CVec times_i(const CVec& z) {
  CVec w(z.size());
  for (size_t k = 0; k < z.size(); ++k) w[k] = cplx(0.0, 1.0) * z[k];
  return w;
}

// ---- dense solve (partial-pivot Gauss) --------------------------------

inline Vec solve_linear(Mat A, Vec b) {
  const int m = A.rows;
  for (int col = 0; col < m; ++col) {
    int piv = col;
    double best = std::fabs(A(col, col));
    for (int r = col + 1; r < m; ++r) {
      double v = std::fabs(A(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) fail(Err::singular, "singular linear system");
    if (piv != col) {
      for (int j = 0; j < m; ++j) std::swap(A(col, j), A(piv, j));
      std::swap(b[col], b[piv]);
    }
    double d = A(col, col);
    for (int r = col + 1; r < m; ++r) {
      double f = A(r, col) / d;
      if (f == 0.0) continue;
      A(r, col) = 0.0;
      for (int j = col + 1; j < m; ++j) A(r, j) -= f * A(col, j);
      b[r] -= f * b[col];
    }
  }
  Vec x(m, 0.0);
  for (int i = m - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < m; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  return x;
}

// ---- cyclic Jacobi eigensolver (real symmetric) ------------------------

struct EigenSystem {
  Vec values;   // ascending
  Mat vectors;  // columns are eigenvectors, matching order
};

inline EigenSystem jacobi_eigen(Mat A) {
  const int m = A.rows;
  Mat V = Mat::identity(m);
  // symmetrize defensively; the inputs are symmetric up to rounding
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double s = 0.5 * (A(i, j) + A(j, i));
      A(i, j) = A(j, i) = s;
    }
  const double scale0 = std::max(1e-300, frob_norm(A));
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) off += A(i, j) * A(i, j);
    if (std::sqrt(off) <= 1e-15 * scale0) break;
    for (int p = 0; p < m - 1; ++p) {
      for (int q = p + 1; q < m; ++q) {
        double apq = A(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < m; ++k) {
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < m; ++k) {
          double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < m; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  EigenSystem es;
  es.values.resize(m);
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return A(i, i) < A(j, j) || (A(i, i) == A(j, j) && i < j); });
  es.vectors = Mat(m, m);
  for (int c2 = 0; c2 < m; ++c2) {
    es.values[c2] = A(order[c2], order[c2]);
    for (int r = 0; r < m; ++r) es.vectors(r, c2) = V(r, order[c2]);
  }
  return es;
}

inline double spectral_norm(const Mat& A) {
  if (A.rows == 0) return 0.0;
  EigenSystem es = jacobi_eigen(A);
  return std::max(std::fabs(es.values.front()), std::fabs(es.values.back()));
}

// ---- Hermitian forms via real embedding --------------------------------
// Form convention used throughout: F(V) = sum_{k,l} F_{kl} V_k conj(V_l),
// with F Hermitian, which matches the sesquilinear Hessian forms. The real
// embedding M (2n x 2n, symmetric) satisfies F(V) = v^T M v for v the real
// form of V, and carries the same spectrum with doubled multiplicity.

inline Mat hermitian_real_embedding(const CMat& F) {
  const int n = F.rows;
  Mat M(2 * n, 2 * n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      double Akl = std::real(F(k, l));
      double Bkl = std::imag(F(k, l));
      M(2 * k, 2 * l) += Akl;
      M(2 * k + 1, 2 * l + 1) += Akl;
      M(2 * k, 2 * l + 1) += Bkl;
      M(2 * k + 1, 2 * l) += -Bkl;
    }
  return M;
}

struct HermitianMin {
  double value = 0.0;
  CVec direction;  // unit argmin of F(V) over the sphere
};

inline HermitianMin hermitian_min_eig(const CMat& F) {
  EigenSystem es = jacobi_eigen(hermitian_real_embedding(F));
  HermitianMin out;
  out.value = es.values[0];
  Vec x(2 * F.rows);
  for (int i = 0; i < 2 * F.rows; ++i) x[i] = es.vectors(i, 0);
  out.direction = to_complex(x);
  return out;
}

inline double spectral_norm(const CMat& A) {
  if (A.rows == 0) return 0.0;
  return spectral_norm(hermitian_real_embedding(A));
}

// ---- minimize x'Ax + 2b'x on the unit sphere ---------------------------
// Equality-constrained trust-region subproblem, solved through the
// eigendecomposition of A and the secular equation in the eigenbasis.
// Handles the hard case (b orthogonal to the bottom eigenspace).

struct SphereMin {
  double value = 0.0;
  Vec argmin;
};

inline SphereMin minimize_quadratic_on_sphere(const Mat& A, const Vec& b) {
  const int m = A.rows;
  SphereMin out;
  if (m == 0) {
    out.value = 0.0;
    return out;
  }
  EigenSystem es = jacobi_eigen(A);
  Vec bt(m, 0.0);  // b in eigenbasis
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int r = 0; r < m; ++r) s += es.vectors(r, i) * b[r];
    bt[i] = s;
  }
  const double d1 = es.values[0];
  const double bnorm = norm2(bt);
  const double tiny = 1e-14 * (1.0 + bnorm);

  auto assemble = [&](const Vec& xt) {
    Vec x(m, 0.0);
    for (int r = 0; r < m; ++r) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += es.vectors(r, i) * xt[i];
      x[r] = s;
    }
    return x;
  };
  auto value_of = [&](const Vec& xt) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += es.values[i] * xt[i] * xt[i] + 2.0 * bt[i] * xt[i];
    return s;
  };

  if (bnorm <= tiny) {  // pure eigenproblem
    Vec xt(m, 0.0);
    xt[0] = 1.0;
    out.value = d1;
    out.argmin = assemble(xt);
    return out;
  }

  // candidate multipliers live in (-inf, d1]; phi(lambda) = ||xt(lambda)||^2
  auto phi = [&](double lam) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      double den = es.values[i] - lam;
      s += (bt[i] * bt[i]) / (den * den);
    }
    return s;
  };

  const bool b1_zero = std::fabs(bt[0]) <= tiny;
  if (b1_zero) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      if (std::fabs(es.values[i] - d1) <= 1e-13 * (1.0 + std::fabs(d1))) continue;
      double den = es.values[i] - d1;
      s += (bt[i] * bt[i]) / (den * den);
    }
    if (s <= 1.0) {  // hard case: pad with bottom-eigenvector mass
      Vec xt(m, 0.0);
      for (int i = 0; i < m; ++i) {
        double den = es.values[i] - d1;
        if (std::fabs(den) <= 1e-13 * (1.0 + std::fabs(d1))) continue;
        xt[i] = -bt[i] / den;
      }
      xt[0] = std::sqrt(std::max(0.0, 1.0 - s));
      out.value = value_of(xt);
      out.argmin = assemble(xt);
      return out;
    }
  }

  // bracket the root of phi(lambda) = 1 below d1, then bisect
  double hi = d1 - 1e-18 * (1.0 + std::fabs(d1));
  double step = std::max(1e-12, bnorm);
  double lo = d1 - step;
  for (int it = 0; it < 200 && phi(lo) > 1.0; ++it) {
    step *= 2.0;
    lo = d1 - step;
  }
  for (int it = 0; it < 220; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (phi(mid) > 1.0)
      hi = mid;
    else
      lo = mid;
  }
  double lam = 0.5 * (lo + hi);
  Vec xt(m, 0.0);
  for (int i = 0; i < m; ++i) xt[i] = -bt[i] / (es.values[i] - lam);
  double nrm = norm2(xt);
  if (nrm > 0.0)
    for (double& v : xt) v /= nrm;
  out.value = value_of(xt);
  out.argmin = assemble(xt);
  return out;
}

// ---- orthonormalization -------------------------------------------------

// Modified Gram-Schmidt over the Hermitian inner product; returns an
// orthonormal basis of the span of `vs` (vectors below `tol` are dropped).
inline std::vector<CVec> orthonormalize(const std::vector<CVec>& vs, double tol = 1e-12) {
  std::vector<CVec> basis;
  for (CVec v : vs) {
    for (const CVec& b : basis) {
      cplx c = hdot(v, b);
      for (size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
    double n = norm2(v);
    if (n > tol) {
      for (cplx& x : v) x /= n;
      basis.push_back(std::move(v));
    }
  }
  return basis;
}

inline std::vector<Vec> orthonormalize_real(const std::vector<Vec>& vs, double tol = 1e-12) {
  std::vector<Vec> basis;
  for (Vec v : vs) {
    for (const Vec& b : basis) {
      double c = dot(v, b);
      axpy(-c, b, v);
    }
    double n = norm2(v);
    if (n > tol) {
      scale(v, 1.0 / n);
      basis.push_back(std::move(v));
    }
  }
  return basis;
}

}  // namespace dk
