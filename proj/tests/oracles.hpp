#pragma once

// Test-only oracles, independent of the library's projection/Newton path:
// a dense-grid boundary scan for the standard complex ellipsoid, closed
// forms for the ball, and finite-difference derivative estimates.

#include <cmath>

#include "deltakit/distance.hpp"
#include "deltakit/domain.hpp"

namespace oracles {

using dk::CMat;
using dk::CVec;
using dk::cplx;
using dk::Mat;
using dk::Vec;

// Nearest boundary point of { 2|z1|^2 + |z2|^2 = 1 } by scanning a
// 100x100x100 parameter grid (1e6 samples) and then shrinking local grids
// around the best cell. Wholly independent of the Newton projection.
struct BruteProjection {
  Vec q;
  double dist;
};

inline BruteProjection brute_force_project_ellipsoid(const Vec& z) {
  const double pi = 3.14159265358979323846;
  auto point_at = [](double alpha, double p1, double p2) {
    double ca = std::cos(alpha), sa = std::sin(alpha);
    const double inv_sqrt2 = 0.70710678118654752440;
    return Vec{ca * inv_sqrt2 * std::cos(p1), ca * inv_sqrt2 * std::sin(p1),
               sa * std::cos(p2), sa * std::sin(p2)};
  };
  auto dist2 = [&](double alpha, double p1, double p2) {
    Vec q = point_at(alpha, p1, p2);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += (q[i] - z[i]) * (q[i] - z[i]);
    return s;
  };

  const int N = 100;
  double best = 1e300, ba = 0, b1 = 0, b2 = 0;
  for (int ia = 0; ia < N; ++ia) {
    double alpha = 0.5 * pi * ia / (N - 1);
    for (int i1 = 0; i1 < N; ++i1) {
      double p1 = 2.0 * pi * i1 / N;
      for (int i2 = 0; i2 < N; ++i2) {
        double p2 = 2.0 * pi * i2 / N;
        double d2 = dist2(alpha, p1, p2);
        if (d2 < best) {
          best = d2;
          ba = alpha;
          b1 = p1;
          b2 = p2;
        }
      }
    }
  }
  // local refinement: 11^3 grids shrinking around the best parameters
  double wa = 0.5 * pi / (N - 1), w1 = 2.0 * pi / N, w2 = 2.0 * pi / N;
  for (int round = 0; round < 9; ++round) {
    double ca = ba, c1 = b1, c2 = b2;
    for (int ia = -5; ia <= 5; ++ia)
      for (int i1 = -5; i1 <= 5; ++i1)
        for (int i2 = -5; i2 <= 5; ++i2) {
          double alpha = std::clamp(ca + wa * ia / 5.0, 0.0, 0.5 * pi);
          double p1 = c1 + w1 * i1 / 5.0;
          double p2 = c2 + w2 * i2 / 5.0;
          double d2 = dist2(alpha, p1, p2);
          if (d2 < best) {
            best = d2;
            ba = alpha;
            b1 = p1;
            b2 = p2;
          }
        }
    wa *= 0.2;
    w1 *= 0.2;
    w2 *= 0.2;
  }
  return {point_at(ba, b1, b2), std::sqrt(best)};
}

// ---- unit ball closed forms -------------------------------------------------

inline double ball_delta(const Vec& z) { return dk::norm2(z) - 1.0; }

inline Vec ball_grad_delta(const Vec& z) { return dk::scaled(z, 1.0 / dk::norm2(z)); }

inline Mat ball_hessian_delta(const Vec& z) {
  const int m = static_cast<int>(z.size());
  double rho = dk::norm2(z);
  Mat H(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      H(i, j) = ((i == j ? 1.0 : 0.0) - z[i] * z[j] / (rho * rho)) / rho;
  return H;
}

inline CMat ball_levi_delta(const Vec& z) {
  CVec zc = dk::to_complex(z);
  double rho = dk::norm2(z);
  const int n = static_cast<int>(zc.size());
  CMat L(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      L(k, l) = (k == l ? cplx(1.0 / (2.0 * rho)) : cplx(0.0)) -
                std::conj(zc[k]) * zc[l] / (4.0 * rho * rho * rho);
  return L;
}

// ---- finite differences -------------------------------------------------------

template <typename F>
Vec fd_gradient(F&& f, const Vec& x, double h) {
  Vec g(x.size());
  for (size_t j = 0; j < x.size(); ++j) {
    Vec xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    g[j] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

template <typename F>
Mat fd_hessian(F&& f, const Vec& x, double h) {
  const int m = static_cast<int>(x.size());
  Mat H(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Vec a = x, b = x, c = x, d = x;
      a[i] += h; a[j] += h;
      b[i] += h; b[j] -= h;
      c[i] -= h; c[j] += h;
      d[i] -= h; d[j] -= h;
      H(i, j) = (f(a) - f(b) - f(c) + f(d)) / (4.0 * h * h);
    }
  return H;
}

}  // namespace oracles
