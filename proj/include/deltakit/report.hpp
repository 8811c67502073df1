#pragma once

// Report assembly: JSON documents for analyze/classify/verify/df, CSV
// tables for sweeps. Key order is fixed (ordered_json) and numbers use
// shortest round-trip formatting, so identical inputs give identical
// bytes. Wall-clock metadata is attached only when requested.

#include <string>

#include "deltakit/theorems.hpp"

namespace dk {

struct Defaults {
  double shell_factor = 0.1;  // default shell = 0.1 * scale
  int samples = 500;
  double tol = 1e-8;
  double gamma_cap = 1e3;
  int cone_resolution = 48;
  uint64_t seed = 42;
  double classify_eps = 1e-8;
  double max_gamma_tol = 1e-10;
  double newton_tol = 1e-12;
  int newton_max_iters = 50;
  int multistart_seeds = 32;
  double ambiguity_tol = 1e-8;
};

const Defaults& defaults();

std::string report_json(const TheoremReport& rep, bool with_meta, bool pretty = true);
std::string report_csv(const TheoremReport& rep);  // one row per sample: point, delta, slack

std::string df_json(const DfResult& res, bool with_meta, bool pretty = true);

// delta, grad delta, Hessian forms and the positivity report at the
// nearest boundary point.
std::string analyze_json(const DomainSpec& spec, const Vec& point, double gamma_query,
                         bool with_meta, bool pretty = true);

struct ClassifySweep {
  std::string domain;
  int n_samples = 0;
  uint64_t seed = 0;
  double gamma_query = 0.0;
  std::vector<PositivityReport> points;
  double runtime_sec = 0.0;
};

ClassifySweep classify_sweep(const DomainSpec& spec, int n_samples, uint64_t seed,
                             double gamma_query, int threads);

std::string classify_json(const ClassifySweep& sweep, bool with_meta, bool per_point,
                          bool pretty = true);

// Header: x1,..,x{2n},min_eig_L_CT,min_eig_H_RT,max_gamma,eta  (sweep/v1)
std::string sweep_csv(const ClassifySweep& sweep);

std::string catalog_json(bool pretty = true);

}  // namespace dk
