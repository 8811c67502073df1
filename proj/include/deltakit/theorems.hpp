#pragma once

// Slack functions and verification sweeps for the positivity-propagation
// statements. Every statement is normalized to an inequality on D = delta^2
// of the form  LHS-form(V,V) <= RHS(V)  at interior (or exterior) shell
// points; slack = RHS - LHS. Pass/fail does not depend on direction
// sampling: per sampled point the slack is minimized exactly over all unit
// V through the eigendecomposition of the difference form.

#include <cstdint>
#include <string>
#include <vector>

#include "deltakit/distance.hpp"
#include "deltakit/domain.hpp"
#include "deltakit/frames.hpp"

namespace dk {

enum class TheoremKind { oka, convex, cconvex, psh, gamma };

TheoremKind theorem_kind_from_string(const std::string& s);
std::string to_string(TheoremKind k);

// RHS - LHS of the D-inequality at (q, V); V must be a unit vector.
//   oka:     |<dD,V>|^2 / D           - L_D(V,V)
//   convex:  <gD,V>^2 / (2D)          - H_D(V,V)
//   cconvex: (<gD,V>^2+<gD,iV>^2)/(2D) - H_D(V,V)
//   psh:     |<dD,V>|^2 / (2D)        - L_D(V,V)
//   gamma:   (1 + 2/(2+g^2)) |<dD,V>|^2 / (2D) - L_D(V,V)
double theorem_slack(TheoremKind kind, const DomainSpec& spec, const Vec& q, const CVec& V,
                     double gamma = 0.0, const ProjectionParams& pp = {});

struct SlackMin {
  double value = 0.0;
  CVec direction;     // unit argmin
  double form_scale;  // 2-norm of the difference form, for relative tolerances
};

// Exact minimum of the slack over unit directions at one point.
SlackMin slack_min_over_directions(TheoremKind kind, const DForms& df, double gamma);

struct VerifyParams {
  double shell = 0.0;  // 0: use the spec default
  int n_samples = 500;
  uint64_t seed = 42;
  double tol = 1e-8;  // relative; threshold is tol * (1 + form scale)
  std::string side = "inside";
  double gamma = 1.0;  // kind == gamma only
  int threads = 1;
  int direction_probes = 4;  // random unit directions per sample (cross-check)
  bool keep_rows = false;    // per-sample table for CSV output
  bool certify_shell = false;  // on failure, halve the shell until it passes
  int hypothesis_samples = 48;
};

struct SampleRow {
  Vec z;
  double delta;
  double slack;
};

struct TheoremReport {
  std::string kind;
  std::string domain;
  std::string side;
  double gamma = 0.0;
  double shell = 0.0;
  int n_samples = 0;
  uint64_t seed = 0;
  double tol = 0.0;
  double tol_abs = 0.0;
  double min_slack = 0.0;
  Vec argmin_point;
  CVec argmin_direction;
  bool pass = false;
  double form_scale = 0.0;
  int skipped_ambiguous = 0;
  int skipped_inaccurate = 0;
  std::string hypothesis_flag;
  double hypothesis_fraction = 0.0;
  int hypothesis_checked = 0;
  double certified_shell = 0.0;  // 0 when certification was not requested / failed
  double runtime_sec = 0.0;
  std::vector<SampleRow> rows;
};

TheoremReport verify_theorem(TheoremKind kind, const DomainSpec& spec, const VerifyParams& vp = {});

// eta = 1 - 2 / (2 + gamma^2), the exponent certified by aperture gamma.
double df_exponent(double gamma);

// Levi form of -(-delta)^eta at an interior point, via the factorization
// eta (-delta)^(eta-2) [ (-delta) L_delta(V,V) + (1-eta) |<ddelta,V>|^2 ].
double levi_power(const DomainSpec& spec, const Vec& q, double eta, const CVec& V,
                  const ProjectionParams& pp = {});

SlackMin levi_power_min(const DomainSpec& spec, const Vec& q, double eta,
                        const ProjectionParams& pp = {});

struct DfParams {
  double shell = 0.0;
  int n_boundary = 200;
  int n_shell = 200;
  uint64_t seed = 42;
  double tol = 1e-6;  // relative for the power-function positivity check
  int threads = 1;
};

struct DfResult {
  std::string domain;
  double shell = 0.0;
  int n_boundary = 0;
  int n_shell = 0;
  uint64_t seed = 0;
  double gamma_star = 0.0;  // inf over sampled boundary points of max_gamma
  double eta = 0.0;
  bool certified = false;   // gamma_star > 0 and the psh check passed
  std::string note;
  double psh_min = 0.0;     // min over shell samples of the exact direction minimum
  double psh_tol_abs = 0.0;
  Vec argmin_point;
  CVec argmin_direction;
  double pseudoconvex_fraction = 0.0;
  Vec worst_boundary_point;  // argmin of max_gamma
  double runtime_sec = 0.0;
};

DfResult df_verify(const DomainSpec& spec, const DfParams& dp = {});

struct ConeMinimizerCheck {
  double numeric_min = 0.0;
  double closed_form = 0.0;
  double c0 = 0.0;
};

// Constrained minimum of f(W',c) = 2||V'-W'||^2 + (t-c)^2 over |c| = g||W'||
// (reduced to the ray through V'), compared against the closed form
// 2 t^2/(2+g^2) (1 - ||V'|| g / t)^2 with c0 = g (t g + 2||V'||)/(2+g^2).
ConeMinimizerCheck cone_minimizer_check(double vprime_norm, double t, double gamma);

// ---- shell sampling (shared by verify/df/classify sweeps) -----------------

struct ShellSampler {
  // Deterministic function of (spec, shell, side, seed, index): attempt k
  // draws from substream k, so acceptance is order- and thread-independent.
  struct Accepted {
    Vec z;
    int attempt_index;
    BoundaryPoint boundary;  // projection of z, reusable as an anchor
    double delta = 0.0;
  };
  static std::vector<Accepted> draw(const DomainSpec& spec, double shell, const std::string& side,
                                    int count, uint64_t seed, int threads, int* skipped_ambiguous,
                                    int* skipped_inaccurate);
};

}  // namespace dk
