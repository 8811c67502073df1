#include "deltakit.h"

#include <cstring>
#include <string>

#include "deltakit/report.hpp"

struct dk_domain {
  dk::DomainSpec spec;
};

namespace {

thread_local std::string g_last_error;

dk_status status_of(dk::Err e) {
  switch (e) {
    case dk::Err::ok: return DK_OK;
    case dk::Err::argument: return DK_ERR_ARGUMENT;
    case dk::Err::parse: return DK_ERR_PARSE;
    case dk::Err::io: return DK_ERR_IO;
    case dk::Err::domain: return DK_ERR_DOMAIN;
    case dk::Err::convergence: return DK_ERR_CONVERGENCE;
    case dk::Err::ambiguity: return DK_ERR_AMBIGUITY;
    case dk::Err::singular: return DK_ERR_SINGULAR;
    case dk::Err::accuracy: return DK_ERR_ACCURACY;
    case dk::Err::sampling: return DK_ERR_SAMPLING;
    case dk::Err::internal: return DK_ERR_INTERNAL;
  }
  return DK_ERR_INTERNAL;
}

template <typename Fn>
dk_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DK_OK;
  } catch (const dk::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DK_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DK_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dk::Vec read_point(const dk_domain* d, const double* x) {
  if (!x) dk::fail(dk::Err::argument, "null point");
  return dk::Vec(x, x + d->spec.real_dim());
}

void require(bool cond, const char* what) {
  if (!cond) dk::fail(dk::Err::argument, what);
}

}  // namespace

extern "C" {

const char* dk_version(void) { return "0.1.0"; }

const char* dk_status_name(dk_status s) {
  switch (s) {
    case DK_OK: return "ok";
    case DK_ERR_ARGUMENT: return "argument";
    case DK_ERR_PARSE: return "parse";
    case DK_ERR_IO: return "io";
    case DK_ERR_DOMAIN: return "domain";
    case DK_ERR_CONVERGENCE: return "convergence";
    case DK_ERR_AMBIGUITY: return "ambiguity";
    case DK_ERR_SINGULAR: return "singular";
    case DK_ERR_ACCURACY: return "accuracy";
    case DK_ERR_SAMPLING: return "sampling";
    case DK_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* dk_last_error(void) { return g_last_error.c_str(); }

void dk_string_free(char* s) { delete[] s; }

dk_status dk_catalog_json(char** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = dup_string(dk::catalog_json());
  });
}

dk_status dk_domain_create(const char* name, const char* params_json, dk_domain** out) {
  return guarded([&] {
    require(name && out, "null argument");
    auto d = new dk_domain{dk::make_catalog_domain(name, params_json ? params_json : "{}")};
    *out = d;
  });
}

dk_status dk_domain_create_from_file(const char* path, dk_domain** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new dk_domain{dk::parse_domain_spec_file(path)};
  });
}

dk_status dk_domain_create_from_json(const char* spec_json, dk_domain** out) {
  return guarded([&] {
    require(spec_json && out, "null argument");
    *out = new dk_domain{dk::parse_domain_spec_json(spec_json)};
  });
}

dk_status dk_domain_transform(const dk_domain* d, const double* u_re_im,
                              const double* shift_re_im, dk_domain** out) {
  return guarded([&] {
    require(d && u_re_im && shift_re_im && out, "null argument");
    const int n = d->spec.n;
    dk::CMat U(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double* p = u_re_im + 2 * (i * n + j);
        U(i, j) = dk::cplx(p[0], p[1]);
      }
    dk::CVec shift(n);
    for (int i = 0; i < n; ++i) shift[i] = dk::cplx(shift_re_im[2 * i], shift_re_im[2 * i + 1]);
    *out = new dk_domain{dk::unitary_transform(d->spec, U, shift)};
  });
}

void dk_domain_destroy(dk_domain* d) { delete d; }

int dk_domain_complex_dim(const dk_domain* d) { return d ? d->spec.n : 0; }

dk_status dk_domain_info_json(const dk_domain* d, char** out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = dup_string(dk::domain_info_json(d->spec, true));
  });
}

dk_status dk_eval(const dk_domain* d, const double* x, double* value, double* grad, double* hess) {
  return guarded([&] {
    require(d && x && value, "null argument");
    dk::Derivatives dv = dk::eval_derivatives(d->spec, read_point(d, x));
    *value = dv.value;
    const int m = d->spec.real_dim();
    if (grad)
      for (int i = 0; i < m; ++i) grad[i] = dv.gradient[i];
    if (hess)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) hess[i * m + j] = dv.hessian(i, j);
  });
}

dk_status dk_signed_distance(const dk_domain* d, const double* x, double* delta) {
  return guarded([&] {
    require(d && x && delta, "null argument");
    *delta = dk::signed_distance(d->spec, read_point(d, x));
  });
}

dk_status dk_project(const dk_domain* d, const double* x, double* q, double* nu, double* delta) {
  return guarded([&] {
    require(d && x, "null argument");
    dk::Vec z = read_point(d, x);
    dk::BoundaryPoint bp = dk::project_to_boundary(d->spec, z);
    const int m = d->spec.real_dim();
    if (q)
      for (int i = 0; i < m; ++i) q[i] = bp.q[i];
    if (nu)
      for (int i = 0; i < m; ++i) nu[i] = bp.normal[i];
    if (delta) {
      double dist = dk::norm2(dk::vsub(z, bp.q));
      *delta = dk::eval_value(d->spec, z) < 0.0 ? -dist : dist;
    }
  });
}

dk_status dk_delta_gradient(const dk_domain* d, const double* x, double* grad) {
  return guarded([&] {
    require(d && x && grad, "null argument");
    dk::Vec g = dk::delta_gradient(d->spec, read_point(d, x));
    for (size_t i = 0; i < g.size(); ++i) grad[i] = g[i];
  });
}

dk_status dk_delta_hessian(const dk_domain* d, const double* x, double* hess) {
  return guarded([&] {
    require(d && x && hess, "null argument");
    dk::HessianForms f = dk::delta_hessian(d->spec, read_point(d, x));
    const int m = d->spec.real_dim();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) hess[i * m + j] = f.H(i, j);
  });
}

double dk_df_exponent(double gamma) {
  if (gamma < 0.0) return std::nan("");
  return dk::df_exponent(gamma);
}

dk_status dk_max_gamma(const dk_domain* d, const double* x, double tol, double* out) {
  return guarded([&] {
    require(d && x && out, "null argument");
    dk::BoundaryPoint bp = dk::project_to_boundary(d->spec, read_point(d, x));
    dk::MaxGammaParams mp;
    if (tol > 0.0) mp.tol = tol;
    *out = dk::max_gamma(d->spec, bp, mp);
  });
}

dk_status dk_analyze_json(const dk_domain* d, const double* x, double gamma_query, int with_meta,
                          char** out) {
  return guarded([&] {
    require(d && x && out, "null argument");
    *out = dup_string(dk::analyze_json(d->spec, read_point(d, x), gamma_query, with_meta != 0));
  });
}

dk_status dk_classify_json(const dk_domain* d, int n_samples, uint64_t seed, double gamma_query,
                           int threads, int with_meta, int per_point, char** out) {
  return guarded([&] {
    require(d && out, "null argument");
    require(n_samples > 0, "n_samples must be positive");
    dk::ClassifySweep sw =
        dk::classify_sweep(d->spec, n_samples, seed, gamma_query, std::max(1, threads));
    *out = dup_string(dk::classify_json(sw, with_meta != 0, per_point != 0));
  });
}

dk_status dk_verify_json(const dk_domain* d, const char* kind, double gamma, const char* side,
                         double shell, int n_samples, uint64_t seed, double tol, int threads,
                         int certify_shell, int with_meta, char** json_out, char** csv_out,
                         int* pass_out) {
  return guarded([&] {
    require(d && kind && json_out, "null argument");
    dk::VerifyParams vp;
    vp.gamma = gamma;
    vp.side = side ? side : "inside";
    vp.shell = shell;
    vp.n_samples = n_samples > 0 ? n_samples : dk::defaults().samples;
    vp.seed = seed;
    vp.tol = tol > 0.0 ? tol : dk::defaults().tol;
    vp.threads = std::max(1, threads);
    vp.keep_rows = csv_out != nullptr;
    vp.certify_shell = certify_shell != 0;
    dk::TheoremReport rep =
        dk::verify_theorem(dk::theorem_kind_from_string(kind), d->spec, vp);
    *json_out = dup_string(dk::report_json(rep, with_meta != 0));
    if (csv_out) *csv_out = dup_string(dk::report_csv(rep));
    if (pass_out) *pass_out = rep.pass ? 1 : 0;
  });
}

dk_status dk_df_json(const dk_domain* d, double shell, int n_boundary, int n_shell, uint64_t seed,
                     int threads, int with_meta, char** out, int* certified_out) {
  return guarded([&] {
    require(d && out, "null argument");
    dk::DfParams dp;
    dp.shell = shell;
    if (n_boundary > 0) dp.n_boundary = n_boundary;
    if (n_shell > 0) dp.n_shell = n_shell;
    dp.seed = seed;
    dp.threads = std::max(1, threads);
    dk::DfResult res = dk::df_verify(d->spec, dp);
    *out = dup_string(dk::df_json(res, with_meta != 0));
    if (certified_out) *certified_out = res.certified ? 1 : 0;
  });
}

dk_status dk_sweep_csv(const dk_domain* d, int n_samples, uint64_t seed, int threads, char** out) {
  return guarded([&] {
    require(d && out, "null argument");
    require(n_samples > 0, "n_samples must be positive");
    dk::ClassifySweep sw = dk::classify_sweep(d->spec, n_samples, seed, 1.0, std::max(1, threads));
    *out = dup_string(dk::sweep_csv(sw));
  });
}

}  // extern "C"
