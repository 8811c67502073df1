// Exercises the shared-library C surface: handle lifecycle, pointwise
// evaluation, report generation, and the error-code mapping.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "deltakit.h"

static int failures = 0;

#define CHECK(cond)                                               \
  do {                                                            \
    if (!(cond)) {                                                \
      std::printf("FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

int main() {
  CHECK(std::strcmp(dk_status_name(DK_OK), "ok") == 0);
  CHECK(dk_version() != nullptr);

  // catalog listing is valid JSON-ish and mentions the ball
  char* cat = nullptr;
  CHECK(dk_catalog_json(&cat) == DK_OK);
  CHECK(cat && std::strstr(cat, "\"ball\""));
  dk_string_free(cat);

  // lifecycle + eval
  dk_domain* ball = nullptr;
  CHECK(dk_domain_create("ball", "{}", &ball) == DK_OK);
  CHECK(dk_domain_complex_dim(ball) == 2);
  double x[4] = {0.5, 0.0, 0.0, 0.0};
  double value = 0.0, grad[4], hess[16];
  CHECK(dk_eval(ball, x, &value, grad, hess) == DK_OK);
  CHECK(std::fabs(value + 0.75) < 1e-14);
  CHECK(std::fabs(grad[0] - 1.0) < 1e-14);
  CHECK(std::fabs(hess[0] - 2.0) < 1e-14);
  CHECK(std::fabs(hess[1]) < 1e-14);

  double delta = 0.0;
  CHECK(dk_signed_distance(ball, x, &delta) == DK_OK);
  CHECK(std::fabs(delta + 0.5) < 1e-10);

  double q[4], nu[4];
  CHECK(dk_project(ball, x, q, nu, &delta) == DK_OK);
  CHECK(std::fabs(q[0] - 1.0) < 1e-9);
  CHECK(std::fabs(nu[0] - 1.0) < 1e-12);

  double hd[16];
  CHECK(dk_delta_hessian(ball, x, hd) == DK_OK);
  CHECK(std::fabs(hd[5] - 2.0) < 1e-6);  // tangential curvature 1/rho

  double gamma = 0.0;
  CHECK(dk_max_gamma(ball, x, 0.0, &gamma) == DK_OK);
  CHECK(gamma == 1000.0);

  CHECK(std::fabs(dk_df_exponent(1.0) - 1.0 / 3.0) < 1e-15);
  CHECK(std::isnan(dk_df_exponent(-1.0)));

  // verify: pass flag and JSON payload
  char* json = nullptr;
  int pass = -1;
  CHECK(dk_verify_json(ball, "oka", 0.0, "inside", 0.0, 60, 7, 0.0, 1, 0, 0, &json, nullptr,
                       &pass) == DK_OK);
  CHECK(pass == 1);
  CHECK(json && std::strstr(json, "\"min_slack\""));
  dk_string_free(json);

  // per-sample CSV rows
  char* csv = nullptr;
  json = nullptr;
  CHECK(dk_verify_json(ball, "oka", 0.0, "inside", 0.0, 20, 7, 0.0, 1, 0, 0, &json, &csv,
                       &pass) == DK_OK);
  CHECK(csv && std::strstr(csv, "delta,slack"));
  dk_string_free(csv);
  dk_string_free(json);

  // df on the slab: not certified, exit flag 0
  dk_domain* slab = nullptr;
  CHECK(dk_domain_create("parabolic-slab", nullptr, &slab) == DK_OK);
  int certified = -1;
  json = nullptr;
  CHECK(dk_df_json(slab, 0.0, 40, 40, 42, 1, 0, &json, &certified) == DK_OK);
  CHECK(certified == 0);
  CHECK(json && std::strstr(json, "no positive exponent"));
  dk_string_free(json);
  dk_domain_destroy(slab);

  // sweep CSV header
  csv = nullptr;
  CHECK(dk_sweep_csv(ball, 12, 42, 1, &csv) == DK_OK);
  CHECK(csv && std::strstr(csv, "min_eig_L_CT,min_eig_H_RT,max_gamma,eta"));
  dk_string_free(csv);

  // error mapping
  dk_domain* nope = nullptr;
  CHECK(dk_domain_create("no-such-domain", "{}", &nope) == DK_ERR_ARGUMENT);
  CHECK(std::strlen(dk_last_error()) > 0);
  CHECK(dk_domain_create_from_json("{ not json", &nope) == DK_ERR_PARSE);
  CHECK(dk_domain_create_from_file("/no/such/file.json", &nope) == DK_ERR_IO);

  double far[4] = {9.0, 0.0, 0.0, 0.0};
  CHECK(dk_eval(ball, far, &value, nullptr, nullptr) == DK_ERR_DOMAIN);

  double center[4] = {0.0, 0.0, 0.0, 0.0};
  dk_domain* wide = nullptr;
  CHECK(dk_domain_create_from_json(R"({"catalog": "ball", "shell_width": 1.2})", &wide) == DK_OK);
  CHECK(dk_project(wide, center, q, nu, &delta) == DK_ERR_AMBIGUITY);
  dk_domain_destroy(wide);

  double on_boundary[4] = {1.0, 0.0, 0.0, 0.0};
  double hess2[16];
  (void)hess2;
  dk_domain* b2 = nullptr;
  CHECK(dk_domain_create("ball", "{}", &b2) == DK_OK);
  char* a = nullptr;
  // analyze at a boundary point still works (no D-forms there)
  CHECK(dk_analyze_json(b2, on_boundary, 1.0, 0, &a) == DK_OK);
  CHECK(a && std::strstr(a, "\"positivity\""));
  dk_string_free(a);
  dk_domain_destroy(b2);

  // unitary transform through the C surface: coordinate swap of the ball
  double U[8] = {0, 0, 1, 0, 1, 0, 0, 0};  // [[0,1],[1,0]] as (re,im) pairs
  double shift[4] = {0, 0, 0, 0};
  dk_domain* swapped = nullptr;
  CHECK(dk_domain_transform(ball, U, shift, &swapped) == DK_OK);
  double delta2 = 0.0;
  CHECK(dk_signed_distance(swapped, x, &delta2) == DK_OK);
  CHECK(std::fabs(delta2 + 0.5) < 1e-10);
  dk_domain_destroy(swapped);

  // a user spec file for the graph model h = |z1|^2 - 2 (Im z2)^2 on a
  // local patch certifies the 1/3 exponent
  dk_domain* graph = nullptr;
  const char* graph_spec = R"({
    "schema_version": 1,
    "name": "graph-model",
    "n": 2,
    "expression": "x3 + x1^2 + x2^2 - 2*x4^2",
    "bbox": [[-3e-4, 3e-4], [-3e-4, 3e-4], [-3e-4, 3e-4], [-3e-4, 3e-4]],
    "shell_width": 1.35e-4,
    "scale": 0.25
  })";
  CHECK(dk_domain_create_from_json(graph_spec, &graph) == DK_OK);
  int cert2 = -1;
  json = nullptr;
  CHECK(dk_df_json(graph, 0.0, 120, 120, 42, 2, 0, &json, &cert2) == DK_OK);
  CHECK(cert2 == 1);
  if (json) {
    // eta lands within 1e-3 of 1/3
    const char* pos = std::strstr(json, "\"eta\":");
    CHECK(pos != nullptr);
    if (pos) {
      double eta = std::atof(pos + 6);
      CHECK(std::fabs(eta - 1.0 / 3.0) < 1e-3);
    }
  }
  dk_string_free(json);
  dk_domain_destroy(graph);

  dk_domain_destroy(ball);

  if (failures == 0) std::printf("capi_tests: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
