#include "deltakit/domain.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "deltakit/rng.hpp"
#include "json.hpp"

namespace dk {

using njson = nlohmann::ordered_json;

namespace {

Mat realify(const CMat& U) {
  const int n = U.rows;
  Mat J(2 * n, 2 * n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      J(2 * k, 2 * l) = std::real(U(k, l));
      J(2 * k, 2 * l + 1) = -std::imag(U(k, l));
      J(2 * k + 1, 2 * l) = std::imag(U(k, l));
      J(2 * k + 1, 2 * l + 1) = std::real(U(k, l));
    }
  return J;
}

void check_unitary(const CMat& U) {
  const int n = U.rows;
  if (U.cols != n) fail(Err::argument, "unitary_transform: U must be square");
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx s(0.0);
      for (int k = 0; k < n; ++k) s += std::conj(U(k, i)) * U(k, j);
      worst = std::max(worst, std::abs(s - (i == j ? cplx(1.0) : cplx(0.0))));
    }
  if (worst > 1e-12) {
    std::ostringstream os;
    os << "unitary_transform: U is not unitary (defect " << worst << ")";
    fail(Err::argument, os.str());
  }
}

void require_in_box(const DomainSpec& spec, const Vec& x) {
  if (static_cast<int>(x.size()) != spec.real_dim())
    fail(Err::argument, "point has wrong dimension");
  if (!spec.bbox.contains(x, 1e-9 * (1.0 + spec.scale)))
    fail(Err::domain, "point outside bounding box of '" + spec.name + "'");
}

}  // namespace

double eval_value_unchecked(const DomainSpec& spec, const Vec& x) {
  const Vec z = spec.map ? spec.map->apply(x) : x;
  return eval(*spec.expr, z);
}

double eval_value(const DomainSpec& spec, const Vec& x) {
  require_in_box(spec, x);
  return eval_value_unchecked(spec, x);
}

ValueGrad eval_gradient_unchecked(const DomainSpec& spec, const Vec& x) {
  const Vec z = spec.map ? spec.map->apply(x) : x;
  Dual1 d = eval_dual1(*spec.expr, z);
  ValueGrad out;
  out.value = d.v;
  out.gradient = spec.map ? matvec(transpose(spec.map->J), d.g) : std::move(d.g);
  return out;
}

Derivatives eval_derivatives_unchecked(const DomainSpec& spec, const Vec& x) {
  if (static_cast<int>(x.size()) != spec.real_dim())
    fail(Err::argument, "point has wrong dimension");
  const Vec z = spec.map ? spec.map->apply(x) : x;
  Dual2 d = eval_dual(*spec.expr, z);
  Derivatives out;
  out.value = d.v;
  if (!spec.map) {
    out.gradient = std::move(d.g);
    out.hessian = std::move(d.h);
    return out;
  }
  const Mat& J = spec.map->J;
  const Mat Jt = transpose(J);
  out.gradient = matvec(Jt, d.g);
  out.hessian = matmul(Jt, matmul(d.h, J));
  return out;
}

Derivatives eval_derivatives(const DomainSpec& spec, const Vec& x) {
  require_in_box(spec, x);
  return eval_derivatives_unchecked(spec, x);
}

HessianForms hessian_forms(const DomainSpec& spec, const Vec& x) {
  Derivatives d = eval_derivatives(spec, x);
  return assemble_forms(d.hessian, x, spec.name);
}

double taylor_residual(const DomainSpec& spec, const Vec& p, const CVec& W) {
  const Vec w = to_real(W);
  const Vec q = vadd(p, w);
  Derivatives dp = eval_derivatives(spec, p);
  const double fq = eval_value(spec, q);
  HessianForms forms = assemble_forms(dp.hessian, p, spec.name);
  const double linear = 2.0 * std::real(complex_pairing(dp.gradient, W));
  const double second = std::real(apply_form(forms, FormKind::Q, W, W)) +
                        std::real(apply_form(forms, FormKind::L, W, W));
  return fq - (dp.value + linear + second);
}

DomainSpec unitary_transform(const DomainSpec& spec, const CMat& U, const CVec& shift) {
  if (U.rows != spec.n || static_cast<int>(shift.size()) != spec.n)
    fail(Err::argument, "unitary_transform: dimension mismatch");
  check_unitary(U);

  AffineMap step;  // old working coords w = U u + shift
  step.U = U;
  step.shift = shift;
  step.J = realify(U);
  step.t = to_real(shift);

  DomainSpec out = spec;
  out.name = spec.name + "~U";
  if (!spec.map) {
    out.map = step;
  } else {
    // compose: z = U1 w + t1, w = U2 u + s2  =>  z = (U1 U2) u + (U1 s2 + t1)
    AffineMap comp;
    const AffineMap& m1 = *spec.map;
    comp.U = CMat(spec.n, spec.n);
    for (int i = 0; i < spec.n; ++i)
      for (int j = 0; j < spec.n; ++j) {
        cplx s(0.0);
        for (int k = 0; k < spec.n; ++k) s += m1.U(i, k) * U(k, j);
        comp.U(i, j) = s;
      }
    comp.shift.resize(spec.n);
    for (int i = 0; i < spec.n; ++i) {
      cplx s = m1.shift[i];
      for (int k = 0; k < spec.n; ++k) s += m1.U(i, k) * shift[k];
      comp.shift[i] = s;
    }
    comp.J = realify(comp.U);
    comp.t = to_real(comp.shift);
    out.map = comp;
  }

  // new box: axis-aligned hull of the preimage u = J^T (w - t) of the old box
  const Mat Jt = transpose(step.J);
  const int m = spec.real_dim();
  BBox nb;
  nb.lo.assign(m, 0.0);
  nb.hi.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double lo = 0.0, hi = 0.0;
    for (int j = 0; j < m; ++j) {
      const double a = Jt(i, j);
      const double wl = spec.bbox.lo[j] - step.t[j];
      const double wh = spec.bbox.hi[j] - step.t[j];
      lo += std::min(a * wl, a * wh);
      hi += std::max(a * wl, a * wh);
    }
    nb.lo[i] = lo;
    nb.hi[i] = hi;
  }
  out.bbox = nb;
  validate_domain(out);
  return out;
}

// ---- catalog --------------------------------------------------------------

namespace {

std::string abs2_term(int j) {  // |z_j|^2, j 1-based
  std::ostringstream os;
  os << "x" << (2 * j - 1) << "^2 + x" << (2 * j) << "^2";
  return os.str();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

BBox cube(int m, double halfwidth) {
  BBox b;
  b.lo.assign(m, -halfwidth);
  b.hi.assign(m, halfwidth);
  return b;
}

int param_int(const njson& p, const char* key, int dflt, int lo, int hi) {
  if (!p.contains(key)) return dflt;
  if (!p[key].is_number_integer()) fail(Err::parse, std::string("param '") + key + "' must be an integer");
  int v = p[key].get<int>();
  if (v < lo || v > hi) fail(Err::parse, std::string("param '") + key + "' out of range");
  return v;
}

double param_num(const njson& p, const char* key, double dflt, double lo, double hi) {
  if (!p.contains(key)) return dflt;
  if (!p[key].is_number()) fail(Err::parse, std::string("param '") + key + "' must be a number");
  double v = p[key].get<double>();
  if (!(v >= lo && v <= hi)) fail(Err::parse, std::string("param '") + key + "' out of range");
  return v;
}

Vec param_vec(const njson& p, const char* key, Vec dflt, int len) {
  if (!p.contains(key)) {
    dflt.resize(len, dflt.empty() ? 1.0 : dflt.back());
    return dflt;
  }
  if (!p[key].is_array()) fail(Err::parse, std::string("param '") + key + "' must be an array");
  Vec v = p[key].get<Vec>();
  if (static_cast<int>(v.size()) != len)
    fail(Err::parse, std::string("param '") + key + "' must have length n");
  for (double c : v)
    if (!(c > 0.0)) fail(Err::parse, std::string("param '") + key + "' entries must be positive");
  return v;
}

DomainSpec finish(std::string name, int n, const std::string& expr_src, BBox box,
                  double scale, double shell, const njson& params) {
  DomainSpec s;
  s.name = std::move(name);
  s.n = n;
  s.expr_src = expr_src;
  s.expr = parse_expression(expr_src);
  s.bbox = std::move(box);
  s.scale = scale;
  s.shell_width = shell;
  s.params_json = params.dump();
  if (max_variable(*s.expr) > 2 * n) fail(Err::internal, "catalog expression dimension bug");
  validate_domain(s);
  return s;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"ball", "unit ball: sum |z_j|^2 - 1", "n (int, default 2)"},
      {"complex-ellipsoid", "sum a_j |z_j|^2 - 1", "n (int, default 2); a (array, default [2,1])"},
      {"real-ellipsoid", "sum a_j x_{2j-1}^2 + b_j x_{2j}^2 - 1",
       "n (int, default 2); a (default [1,3]); b (default [2,1])"},
      {"half-space", "Re z_n (flat graph h = 0)", "n (int, default 2)"},
      {"parabolic-slab", "Re z_2 - (Im z_2)^2", "(none)"},
      {"model", "Re z_2 + |z_1|^2 - beta (Im z_2)^2",
       "beta (default 2); box (halfwidth, default 0.35); shell (default 0.1*scale)"},
      {"nonpsc-graph", "Re z_2 - |z_1|^2 (not pseudoconvex at 0)", "(none)"},
      {"sheared-ball", "image of the ball under (z1, z2 + c z1^2)", "c (default 0.75)"},
  };
  return entries;
}

DomainSpec make_catalog_domain(const std::string& name, const std::string& params_json) {
  njson p;
  try {
    p = params_json.empty() ? njson::object() : njson::parse(params_json);
  } catch (const nlohmann::json::exception& e) {
    fail(Err::parse, std::string("params: ") + e.what());
  }
  if (!p.is_object()) fail(Err::parse, "params must be a JSON object");

  if (name == "ball") {
    int n = param_int(p, "n", 2, 1, 8);
    std::ostringstream os;
    for (int j = 1; j <= n; ++j) os << (j > 1 ? " + " : "") << abs2_term(j);
    os << " - 1";
    return finish(name, n, os.str(), cube(2 * n, 1.6), 1.0, 0.1, p);
  }
  if (name == "complex-ellipsoid") {
    int n = param_int(p, "n", 2, 1, 8);
    Vec a = param_vec(p, "a", {2.0, 1.0}, n);
    std::ostringstream os;
    double semi_min = 1e300, semi_max = 0.0;
    for (int j = 1; j <= n; ++j) {
      os << (j > 1 ? " + " : "") << fmt(a[j - 1]) << "*(" << abs2_term(j) << ")";
      double semi = 1.0 / std::sqrt(a[j - 1]);
      semi_min = std::min(semi_min, semi);
      semi_max = std::max(semi_max, semi);
    }
    os << " - 1";
    double scale = semi_min * semi_min / semi_max;
    return finish(name, n, os.str(), cube(2 * n, semi_max + 0.35), scale, 0.1 * scale, p);
  }
  if (name == "real-ellipsoid") {
    int n = param_int(p, "n", 2, 1, 8);
    Vec a = param_vec(p, "a", {1.0, 3.0}, n);
    Vec b = param_vec(p, "b", {2.0, 1.0}, n);
    std::ostringstream os;
    double semi_min = 1e300, semi_max = 0.0;
    for (int j = 1; j <= n; ++j) {
      os << (j > 1 ? " + " : "") << fmt(a[j - 1]) << "*x" << (2 * j - 1) << "^2 + "
         << fmt(b[j - 1]) << "*x" << (2 * j) << "^2";
      for (double c : {a[j - 1], b[j - 1]}) {
        double semi = 1.0 / std::sqrt(c);
        semi_min = std::min(semi_min, semi);
        semi_max = std::max(semi_max, semi);
      }
    }
    os << " - 1";
    double scale = semi_min * semi_min / semi_max;
    return finish(name, n, os.str(), cube(2 * n, semi_max + 0.35), scale, 0.1 * scale, p);
  }
  if (name == "half-space") {
    // flat boundary: no curvature scale, so the tube is as deep as the box
    int n = param_int(p, "n", 2, 1, 8);
    std::ostringstream os;
    os << "x" << (2 * n - 1);
    return finish(name, n, os.str(), cube(2 * n, 1.5), 2.0, 0.1, p);
  }
  if (name == "parabolic-slab") {
    return finish(name, 2, "x3 - x4^2", cube(4, 1.2), 0.5, 0.05, p);
  }
  if (name == "model") {
    double beta = param_num(p, "beta", 2.0, 1e-6, 64.0);
    double box = param_num(p, "box", 0.35, 1e-6, 2.0);
    double scale = 0.5 / std::max(1.0, beta);
    double shell = param_num(p, "shell", std::min(0.1 * scale, 0.45 * box), 1e-9, 1.0);
    std::ostringstream os;
    os << "x3 + x1^2 + x2^2 - " << fmt(beta) << "*x4^2";
    return finish(name, 2, os.str(), cube(4, box), scale, shell, p);
  }
  if (name == "nonpsc-graph") {
    return finish(name, 2, "x3 - x1^2 - x2^2", cube(4, 0.8), 0.5, 0.05, p);
  }
  if (name == "sheared-ball") {
    double c = param_num(p, "c", 0.75, 0.0, 1.5);
    std::ostringstream os;
    os << "x1^2 + x2^2 + (x3 - " << fmt(c) << "*(x1^2 - x2^2))^2 + (x4 - " << fmt(2.0 * c)
       << "*x1*x2)^2 - 1";
    return finish(name, 2, os.str(), cube(4, 1.35 + 0.35 * c), 0.25, 0.025, p);
  }
  fail(Err::argument, "unknown catalog domain '" + name + "'");
}

// ---- spec files -------------------------------------------------------------

DomainSpec parse_domain_spec_json(const std::string& json_text) {
  njson j;
  try {
    j = njson::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(Err::parse, std::string("spec file: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(Err::parse, "spec file: top level must be an object");
  if (j.contains("schema_version") && j["schema_version"].get<int>() != 1)
    fail(Err::parse, "spec file: unsupported schema_version (expected 1)");

  const std::string params = j.contains("params") ? j["params"].dump() : "{}";
  if (j.contains("catalog")) {
    if (!j["catalog"].is_string()) fail(Err::parse, "spec file: field 'catalog' must be a string");
    DomainSpec s = make_catalog_domain(j["catalog"].get<std::string>(), params);
    if (j.contains("name")) s.name = j["name"].get<std::string>();
    if (j.contains("shell_width")) {
      double w = j["shell_width"].get<double>();
      if (!(w > 0.0)) fail(Err::parse, "spec file: field 'shell_width' must be positive");
      s.shell_width = w;
    }
    return s;
  }

  if (!j.contains("expression")) fail(Err::parse, "spec file: need 'expression' or 'catalog'");
  if (!j.contains("n")) fail(Err::parse, "spec file: missing field 'n'");
  if (!j.contains("bbox")) fail(Err::parse, "spec file: missing field 'bbox'");

  DomainSpec s;
  s.name = j.contains("name") ? j["name"].get<std::string>() : "custom";
  s.n = j["n"].get<int>();
  if (s.n < 1 || s.n > 8) fail(Err::parse, "spec file: field 'n' out of range [1,8]");
  if (!j["expression"].is_string()) fail(Err::parse, "spec file: field 'expression' must be a string");
  s.expr_src = j["expression"].get<std::string>();
  s.expr = parse_expression(s.expr_src);
  if (max_variable(*s.expr) > 2 * s.n)
    fail(Err::parse, "spec file: expression references coordinates beyond x" +
                         std::to_string(2 * s.n));

  const auto& bb = j["bbox"];
  if (!bb.is_array() || static_cast<int>(bb.size()) != 2 * s.n)
    fail(Err::parse, "spec file: field 'bbox' must be an array of 2n [lo,hi] pairs");
  s.bbox.lo.resize(2 * s.n);
  s.bbox.hi.resize(2 * s.n);
  for (int i = 0; i < 2 * s.n; ++i) {
    if (!bb[i].is_array() || bb[i].size() != 2)
      fail(Err::parse, "spec file: bbox entry " + std::to_string(i) + " must be [lo,hi]");
    s.bbox.lo[i] = bb[i][0].get<double>();
    s.bbox.hi[i] = bb[i][1].get<double>();
    if (!(s.bbox.lo[i] < s.bbox.hi[i]))
      fail(Err::parse, "spec file: bbox entry " + std::to_string(i) + " has lo >= hi");
  }
  s.scale = j.contains("scale") ? j["scale"].get<double>() : s.bbox.min_halfwidth();
  if (!(s.scale > 0.0)) fail(Err::parse, "spec file: field 'scale' must be positive");
  s.shell_width = j.contains("shell_width") ? j["shell_width"].get<double>() : 0.1 * s.scale;
  if (!(s.shell_width > 0.0)) fail(Err::parse, "spec file: field 'shell_width' must be positive");
  s.params_json = params;
  validate_domain(s);
  return s;
}

DomainSpec parse_domain_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::io, "cannot open spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_domain_spec_json(buf.str());
}

std::string domain_info_json(const DomainSpec& spec, bool pretty) {
  njson j;
  j["name"] = spec.name;
  j["n"] = spec.n;
  j["expression"] = spec.expr_src;
  j["transformed"] = spec.map.has_value();
  njson bb = njson::array();
  for (int i = 0; i < spec.real_dim(); ++i) bb.push_back({spec.bbox.lo[i], spec.bbox.hi[i]});
  j["bbox"] = bb;
  j["shell_width"] = spec.shell_width;
  j["scale"] = spec.scale;
  j["params"] = njson::parse(spec.params_json);
  return pretty ? j.dump(2) : j.dump();
}

void validate_domain(const DomainSpec& spec) {
  if (spec.n < 1 || spec.n > 8) fail(Err::argument, "domain dimension out of range [1,8]");
  if (!(spec.shell_width > 0.0) || !(spec.scale > 0.0))
    fail(Err::argument, "shell_width and scale must be positive");

  // zero set nonempty: look for a sign change over deterministic samples
  Rng rng(0x5EEDBA5Eu);
  double rmin = 1e300, rmax = -1e300;
  Vec near_zero;
  double best = 1e300;
  const int n_probe = 4096;
  for (int i = 0; i < n_probe; ++i) {
    Vec x = rng.point_in_box(spec.bbox.lo, spec.bbox.hi);
    double r = eval_value(spec, x);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
    if (std::fabs(r) < best) {
      best = std::fabs(r);
      near_zero = x;
    }
  }
  if (!(rmin < 0.0 && rmax > 0.0))
    fail(Err::argument, "domain '" + spec.name + "': zero set not found inside the bounding box");

  // gradient must not vanish along the zero set (sampled); walk a few
  // near-boundary points onto the zero set first
  Rng rng2(0xC0FFEEu);
  int checked = 0;
  for (int i = 0; i < 512 && checked < 48; ++i) {
    Vec x = rng2.point_in_box(spec.bbox.lo, spec.bbox.hi);
    bool ok = true;
    for (int it = 0; it < 40; ++it) {
      Derivatives d = eval_derivatives(spec, x);
      double g2 = dot(d.gradient, d.gradient);
      if (g2 < 1e-16) {
        ok = false;
        break;
      }
      if (std::fabs(d.value) < 1e-12 * (1.0 + spec.scale)) break;
      Vec step = scaled(d.gradient, -d.value / g2);
      // keep the walk inside the box
      Vec xn = vadd(x, step);
      if (!spec.bbox.contains(xn, 0.0)) {
        ok = false;
        break;
      }
      x = xn;
    }
    if (!ok) continue;
    Derivatives d = eval_derivatives(spec, x);
    if (std::fabs(d.value) > 1e-9 * (1.0 + spec.scale)) continue;
    ++checked;
    if (norm2(d.gradient) < 1e-8)
      fail(Err::argument,
           "domain '" + spec.name + "': defining-function gradient vanishes on the zero set");
  }
}

}  // namespace dk
