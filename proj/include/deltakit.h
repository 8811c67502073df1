/* deltakit — signed-distance positivity analysis for smoothly bounded
 * domains in C^n.
 *
 * C API of the shared library. Domains are opaque handles; analysis
 * results cross the boundary as JSON or CSV strings allocated by the
 * library (free them with dk_string_free). All functions return DK_OK on
 * success; on failure dk_last_error() holds a thread-local message.
 */

#ifndef DELTAKIT_H
#define DELTAKIT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct dk_domain dk_domain;

typedef enum dk_status {
  DK_OK = 0,
  DK_ERR_ARGUMENT = 1,
  DK_ERR_PARSE = 2,
  DK_ERR_IO = 3,
  DK_ERR_DOMAIN = 4,      /* point outside bounding box / tube */
  DK_ERR_CONVERGENCE = 5, /* projection Newton failed */
  DK_ERR_AMBIGUITY = 6,   /* two nearest boundary points */
  DK_ERR_SINGULAR = 7,    /* evaluation at delta = 0 */
  DK_ERR_ACCURACY = 8,    /* internal consistency check failed */
  DK_ERR_SAMPLING = 9,    /* rejection sampling starved */
  DK_ERR_INTERNAL = 10
} dk_status;

const char* dk_version(void);
const char* dk_status_name(dk_status s);
const char* dk_last_error(void); /* thread-local; valid until the next call */
void dk_string_free(char* s);

/* ---- domains ---------------------------------------------------------- */

/* JSON array describing the built-in domains. */
dk_status dk_catalog_json(char** out);

/* Catalog entry by name; params_json may be NULL or "{}" for defaults. */
dk_status dk_domain_create(const char* name, const char* params_json, dk_domain** out);

/* Spec file (JSON) from a path or from text. */
dk_status dk_domain_create_from_file(const char* path, dk_domain** out);
dk_status dk_domain_create_from_json(const char* spec_json, dk_domain** out);

/* New domain whose defining function is precomposed with z = U u + shift.
 * u_re_im: 2*n*n doubles, row-major (re, im) pairs; shift_re_im: 2*n. */
dk_status dk_domain_transform(const dk_domain* d, const double* u_re_im,
                              const double* shift_re_im, dk_domain** out);

void dk_domain_destroy(dk_domain* d);
int dk_domain_complex_dim(const dk_domain* d);
dk_status dk_domain_info_json(const dk_domain* d, char** out);

/* ---- pointwise evaluation --------------------------------------------- */

/* Exact value/gradient/Hessian of the defining function at x (2n reals).
 * grad (2n) and hess (2n*2n, row-major) may be NULL. */
dk_status dk_eval(const dk_domain* d, const double* x, double* value, double* grad, double* hess);

dk_status dk_signed_distance(const dk_domain* d, const double* x, double* delta);

/* Closest boundary point, outward unit normal and signed distance. Any of
 * q, nu, delta may be NULL. */
dk_status dk_project(const dk_domain* d, const double* x, double* q, double* nu, double* delta);

dk_status dk_delta_gradient(const dk_domain* d, const double* x, double* grad);

/* Hessian of delta at x (2n*2n, row-major). */
dk_status dk_delta_hessian(const dk_domain* d, const double* x, double* hess);

/* eta = 1 - 2/(2 + gamma^2); returns NaN for negative gamma. */
double dk_df_exponent(double gamma);

/* Largest cone aperture with a nonnegative Levi form at the boundary
 * point nearest to x. */
dk_status dk_max_gamma(const dk_domain* d, const double* x, double tol, double* out);

/* ---- reports ----------------------------------------------------------- */

/* delta, grad delta, Hessian forms and boundary classification at the
 * point x. */
dk_status dk_analyze_json(const dk_domain* d, const double* x, double gamma_query, int with_meta,
                          char** out);

dk_status dk_classify_json(const dk_domain* d, int n_samples, uint64_t seed, double gamma_query,
                           int threads, int with_meta, int per_point, char** out);

/* kind: "oka" | "convex" | "cconvex" | "psh" | "gamma";
 * side: "inside" | "outside"; shell <= 0 or n_samples <= 0 pick defaults.
 * pass_out receives 1/0. csv_out (optional) receives the per-sample table. */
dk_status dk_verify_json(const dk_domain* d, const char* kind, double gamma, const char* side,
                         double shell, int n_samples, uint64_t seed, double tol, int threads,
                         int certify_shell, int with_meta, char** json_out, char** csv_out,
                         int* pass_out);

/* Diederich-Fornaess sweep: gamma* = inf of max_gamma over sampled
 * boundary points, eta = dk_df_exponent(gamma*), then positivity of the
 * power function on the shell. certified_out receives 1/0. */
dk_status dk_df_json(const dk_domain* d, double shell, int n_boundary, int n_shell, uint64_t seed,
                     int threads, int with_meta, char** out, int* certified_out);

/* CSV: x1..x{2n},min_eig_L_CT,min_eig_H_RT,max_gamma,eta (sweep/v1). */
dk_status dk_sweep_csv(const dk_domain* d, int n_samples, uint64_t seed, int threads, char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DELTAKIT_H */
