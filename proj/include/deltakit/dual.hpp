#pragma once

// Second-order forward-mode dual numbers over R^m: value, gradient and
// full Hessian are propagated together, so second derivatives of the
// defining expressions are exact to machine precision (no differencing).

#include <cmath>

#include "deltakit/errors.hpp"
#include "deltakit/linalg.hpp"

namespace dk {

struct Dual2 {
  double v = 0.0;
  Vec g;   // length m
  Mat h;   // m x m, kept symmetric

  Dual2() = default;
  explicit Dual2(int m) : g(m, 0.0), h(m, m) {}

  static Dual2 constant(int m, double c) {
    Dual2 d(m);
    d.v = c;
    return d;
  }
  static Dual2 variable(int m, int j, double x) {
    Dual2 d(m);
    d.v = x;
    d.g[j] = 1.0;
    return d;
  }
  int dim() const { return static_cast<int>(g.size()); }
};

inline Dual2 operator+(const Dual2& a, const Dual2& b) {
  Dual2 r = a;
  r.v += b.v;
  for (size_t i = 0; i < r.g.size(); ++i) r.g[i] += b.g[i];
  for (size_t i = 0; i < r.h.a.size(); ++i) r.h.a[i] += b.h.a[i];
  return r;
}

inline Dual2 operator-(const Dual2& a, const Dual2& b) {
  Dual2 r = a;
  r.v -= b.v;
  for (size_t i = 0; i < r.g.size(); ++i) r.g[i] -= b.g[i];
  for (size_t i = 0; i < r.h.a.size(); ++i) r.h.a[i] -= b.h.a[i];
  return r;
}

inline Dual2 operator-(const Dual2& a) {
  Dual2 r = a;
  r.v = -r.v;
  for (double& x : r.g) x = -x;
  for (double& x : r.h.a) x = -x;
  return r;
}

inline Dual2 operator*(const Dual2& a, const Dual2& b) {
  const int m = a.dim();
  Dual2 r(m);
  r.v = a.v * b.v;
  for (int i = 0; i < m; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      r.h(i, j) = a.v * b.h(i, j) + b.v * a.h(i, j) + a.g[i] * b.g[j] + b.g[i] * a.g[j];
  return r;
}

inline Dual2 operator*(double c, const Dual2& a) {
  Dual2 r = a;
  r.v *= c;
  for (double& x : r.g) x *= c;
  for (double& x : r.h.a) x *= c;
  return r;
}

// chain rule for a scalar function f with derivatives f', f'' at a.v
inline Dual2 apply_scalar(const Dual2& a, double f, double fp, double fpp) {
  const int m = a.dim();
  Dual2 r(m);
  r.v = f;
  for (int i = 0; i < m; ++i) r.g[i] = fp * a.g[i];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) r.h(i, j) = fp * a.h(i, j) + fpp * a.g[i] * a.g[j];
  return r;
}

inline Dual2 exp(const Dual2& a) {
  double e = std::exp(a.v);
  return apply_scalar(a, e, e, e);
}

inline Dual2 pow_int(const Dual2& a, int k) {
  if (k < 0) fail(Err::argument, "pow_int: negative exponent not supported");
  const int m = a.dim();
  if (k == 0) return Dual2::constant(m, 1.0);
  // exact integer power via the scalar chain rule
  double f = std::pow(a.v, k);
  double fp = k * std::pow(a.v, k - 1);
  double fpp = (k >= 2) ? static_cast<double>(k) * (k - 1) * std::pow(a.v, k - 2) : 0.0;
  return apply_scalar(a, f, fp, fpp);
}

// First-order variant for gradient-only paths (zero-set walks, filters).

struct Dual1 {
  double v = 0.0;
  Vec g;

  Dual1() = default;
  explicit Dual1(int m) : g(m, 0.0) {}
  static Dual1 constant(int m, double c) {
    Dual1 d(m);
    d.v = c;
    return d;
  }
  static Dual1 variable(int m, int j, double x) {
    Dual1 d(m);
    d.v = x;
    d.g[j] = 1.0;
    return d;
  }
};

inline Dual1 operator+(const Dual1& a, const Dual1& b) {
  Dual1 r = a;
  r.v += b.v;
  for (size_t i = 0; i < r.g.size(); ++i) r.g[i] += b.g[i];
  return r;
}

inline Dual1 operator-(const Dual1& a, const Dual1& b) {
  Dual1 r = a;
  r.v -= b.v;
  for (size_t i = 0; i < r.g.size(); ++i) r.g[i] -= b.g[i];
  return r;
}

inline Dual1 operator-(const Dual1& a) {
  Dual1 r = a;
  r.v = -r.v;
  for (double& x : r.g) x = -x;
  return r;
}

inline Dual1 operator*(const Dual1& a, const Dual1& b) {
  Dual1 r(static_cast<int>(a.g.size()));
  r.v = a.v * b.v;
  for (size_t i = 0; i < r.g.size(); ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
  return r;
}

inline Dual1 apply_scalar(const Dual1& a, double f, double fp) {
  Dual1 r = a;
  r.v = f;
  for (double& x : r.g) x *= fp;
  return r;
}

inline Dual1 exp(const Dual1& a) {
  double e = std::exp(a.v);
  return apply_scalar(a, e, e);
}

inline Dual1 pow_int(const Dual1& a, int k) {
  if (k < 0) fail(Err::argument, "pow_int: negative exponent not supported");
  if (k == 0) return Dual1::constant(static_cast<int>(a.g.size()), 1.0);
  return apply_scalar(a, std::pow(a.v, k), k * std::pow(a.v, k - 1));
}

}  // namespace dk
