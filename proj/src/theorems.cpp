#include "deltakit/theorems.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>

#include "deltakit/parallel.hpp"
#include "deltakit/rng.hpp"

namespace dk {

TheoremKind theorem_kind_from_string(const std::string& s) {
  if (s == "oka") return TheoremKind::oka;
  if (s == "convex") return TheoremKind::convex;
  if (s == "cconvex") return TheoremKind::cconvex;
  if (s == "psh") return TheoremKind::psh;
  if (s == "gamma") return TheoremKind::gamma;
  fail(Err::argument, "unknown theorem kind '" + s + "'");
}

std::string to_string(TheoremKind k) {
  switch (k) {
    case TheoremKind::oka: return "oka";
    case TheoremKind::convex: return "convex";
    case TheoremKind::cconvex: return "cconvex";
    case TheoremKind::psh: return "psh";
    case TheoremKind::gamma: return "gamma";
  }
  return "?";
}

namespace {

double gamma_coeff(double g) { return 1.0 + 2.0 / (2.0 + g * g); }

// Hermitian difference form for the Levi-side statements, in the
// convention F(V) = sum F_{kl} V_k conj(V_l).
CMat levi_difference_form(TheoremKind kind, const DForms& df, double g) {
  const int n = df.f_D.n;
  CVec s = complex_gradient(df.grad_D);
  double denom = (kind == TheoremKind::oka) ? df.D : 2.0 * df.D;
  double coeff = (kind == TheoremKind::gamma) ? gamma_coeff(g) : 1.0;
  CMat F(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      F(k, l) = coeff * (s[k] * std::conj(s[l])) / denom - df.f_D.L(k, l);
  return F;
}

Mat real_difference_form(TheoremKind kind, const DForms& df) {
  const int m = static_cast<int>(df.grad_D.size());
  const Vec& g = df.grad_D;
  const Vec jg = times_i(g);
  Mat F(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double rank = g[i] * g[j];
      if (kind == TheoremKind::cconvex) rank += jg[i] * jg[j];
      F(i, j) = rank / (2.0 * df.D) - df.f_D.H(i, j);
    }
  return F;
}

}  // namespace

double theorem_slack(TheoremKind kind, const DomainSpec& spec, const Vec& q, const CVec& V,
                     double gamma, const ProjectionParams& pp) {
  if (std::fabs(norm2(V) - 1.0) > 1e-8) fail(Err::argument, "theorem_slack: V must be a unit vector");
  if (kind == TheoremKind::gamma && gamma < 0.0)
    fail(Err::argument, "theorem_slack: gamma must be nonnegative");
  DForms df = d_forms(spec, q, pp);
  const Vec v = to_real(V);
  // Both sides of each inequality carry a factor delta relative to the
  // delta-forms, so the orientation flips with the sign of delta; the
  // exterior slack is LHS - RHS, making "slack >= 0" mean "the conclusion
  // holds on the sampled side" throughout (convexity of delta outside is
  // exactly the reversed D-inequality).
  const double orient = df.delta < 0.0 ? 1.0 : -1.0;
  switch (kind) {
    case TheoremKind::oka: {
      double num = std::norm(complex_pairing(df.grad_D, V));
      return orient * (num / df.D - std::real(apply_form(df.f_D, FormKind::L, V, V)));
    }
    case TheoremKind::psh: {
      double num = std::norm(complex_pairing(df.grad_D, V));
      return orient * (num / (2.0 * df.D) - std::real(apply_form(df.f_D, FormKind::L, V, V)));
    }
    case TheoremKind::gamma: {
      double num = gamma_coeff(gamma) * std::norm(complex_pairing(df.grad_D, V));
      return orient * (num / (2.0 * df.D) - std::real(apply_form(df.f_D, FormKind::L, V, V)));
    }
    case TheoremKind::convex: {
      double num = dot(df.grad_D, v);
      return orient * (num * num / (2.0 * df.D) - dot(v, matvec(df.f_D.H, v)));
    }
    case TheoremKind::cconvex: {
      double a = dot(df.grad_D, v);
      double b = dot(df.grad_D, times_i(v));
      return orient * ((a * a + b * b) / (2.0 * df.D) - dot(v, matvec(df.f_D.H, v)));
    }
  }
  fail(Err::internal, "theorem_slack: bad kind");
}

SlackMin slack_min_over_directions(TheoremKind kind, const DForms& df, double gamma) {
  SlackMin out;
  const double orient = df.delta < 0.0 ? 1.0 : -1.0;  // see theorem_slack
  if (kind == TheoremKind::convex || kind == TheoremKind::cconvex) {
    Mat F = real_difference_form(kind, df);
    if (orient < 0.0)
      for (double& x : F.a) x = -x;
    EigenSystem es = jacobi_eigen(F);
    out.value = es.values[0];
    Vec x(F.rows);
    for (int i = 0; i < F.rows; ++i) x[i] = es.vectors(i, 0);
    out.direction = to_complex(x);
    out.form_scale = std::max(std::fabs(es.values.front()), std::fabs(es.values.back()));
  } else {
    CMat F = levi_difference_form(kind, df, gamma);
    if (orient < 0.0)
      for (cplx& x : F.a) x = -x;
    Mat M = hermitian_real_embedding(F);
    EigenSystem es = jacobi_eigen(M);
    out.value = es.values[0];
    Vec x(M.rows);
    for (int i = 0; i < M.rows; ++i) x[i] = es.vectors(i, 0);
    out.direction = to_complex(x);
    out.form_scale = std::max(std::fabs(es.values.front()), std::fabs(es.values.back()));
  }
  return out;
}

// ---- shell sampling ---------------------------------------------------------

std::vector<ShellSampler::Accepted> ShellSampler::draw(const DomainSpec& spec, double shell,
                                                       const std::string& side, int count,
                                                       uint64_t seed, int threads,
                                                       int* skipped_ambiguous,
                                                       int* skipped_inaccurate) {
  if (side != "inside" && side != "outside")
    fail(Err::argument, "side must be 'inside' or 'outside'");
  const bool inside = side == "inside";
  if (!(shell > 0.0)) fail(Err::argument, "shell width must be positive");

  // keep FD stencils inside the box
  const double margin = 4.0 * (1e-5 * std::max(spec.scale, 0.5));
  Vec lo = spec.bbox.lo, hi = spec.bbox.hi;
  for (size_t i = 0; i < lo.size(); ++i) {
    double m = std::min(margin, 0.25 * (hi[i] - lo[i]));
    lo[i] += m;
    hi[i] -= m;
  }

  struct Slot {
    int state = 0;  // 0 reject, 1 accept, 2 ambiguous, 3 inaccurate
    Vec z;
    BoundaryPoint boundary;
    double delta = 0.0;
  };

  std::vector<Accepted> accepted;
  int amb = 0, inacc = 0;
  const int wave = std::max(64, 8 * std::max(1, threads));
  const long max_attempts = 40000L * std::max(count, 1) + 40000L;
  for (long base = 0; base < max_attempts && static_cast<int>(accepted.size()) < count;
       base += wave) {
    std::vector<Slot> slots(wave);
    parallel_for(wave, threads, [&](int k) {
      const uint64_t idx = static_cast<uint64_t>(base) + k;
      Rng rng = Rng::substream(seed, idx);
      Vec z = rng.point_in_box(lo, hi);
      Derivatives d0 = eval_derivatives(spec, z);
      double gn = norm2(d0.gradient);
      if (gn < 1e-14) return;
      if (std::fabs(d0.value) > 3.0 * shell * gn + 1e-12) return;  // cheap first-order gate
      if (inside ? d0.value >= 0.0 : d0.value <= 0.0) return;
      try {
        BoundaryPoint bp = project_to_boundary(spec, z);
        double dist = norm2(vsub(z, bp.q));
        double delta = d0.value < 0.0 ? -dist : dist;
        double ad = std::fabs(delta);
        if (ad >= shell || ad < 1e-12 * (1.0 + spec.scale)) return;
        slots[k].state = 1;
        slots[k].z = std::move(z);
        slots[k].boundary = std::move(bp);
        slots[k].delta = delta;
      } catch (const Error& e) {
        if (e.code() == Err::ambiguity)
          slots[k].state = 2;
        else if (e.code() == Err::accuracy)
          slots[k].state = 3;
        // convergence/domain failures count as plain rejects
      }
    });
    for (int k = 0; k < wave && static_cast<int>(accepted.size()) < count; ++k) {
      if (slots[k].state == 1)
        accepted.push_back({std::move(slots[k].z), static_cast<int>(base) + k,
                            std::move(slots[k].boundary), slots[k].delta});
      else if (slots[k].state == 2)
        ++amb;
      else if (slots[k].state == 3)
        ++inacc;
    }
  }
  if (skipped_ambiguous) *skipped_ambiguous = amb;
  if (skipped_inaccurate) *skipped_inaccurate = inacc;
  if (static_cast<int>(accepted.size()) < count)
    fail(Err::sampling, "shell sampling starved: got " + std::to_string(accepted.size()) +
                            " of " + std::to_string(count) +
                            " points (shell too thin for the bounding box?)");
  return accepted;
}

// ---- verify -----------------------------------------------------------------

namespace {

struct PerSample {
  bool ok = false;
  double slack = 0.0;
  double form_scale = 0.0;
  double delta = 0.0;
  Vec z;
  CVec direction;
};

TheoremReport run_verify_once(TheoremKind kind, const DomainSpec& spec, const VerifyParams& vp,
                              double shell) {
  const auto t0 = std::chrono::steady_clock::now();
  TheoremReport rep;
  rep.kind = to_string(kind);
  rep.domain = spec.name;
  rep.side = vp.side;
  rep.gamma = (kind == TheoremKind::gamma) ? vp.gamma : 0.0;
  rep.shell = shell;
  rep.n_samples = vp.n_samples;
  rep.seed = vp.seed;
  rep.tol = vp.tol;

  auto points = ShellSampler::draw(spec, shell, vp.side, vp.n_samples, vp.seed, vp.threads,
                                   &rep.skipped_ambiguous, &rep.skipped_inaccurate);

  std::vector<PerSample> results(points.size());
  parallel_for(static_cast<int>(points.size()), vp.threads, [&](int i) {
    PerSample& ps = results[i];
    try {
      DForms df = d_forms(spec, points[i].z, {}, &points[i].boundary);
      SlackMin sm = slack_min_over_directions(kind, df, vp.gamma);
      ps.slack = sm.value;
      ps.direction = sm.direction;
      ps.form_scale = sm.form_scale;
      // random unit directions cross-check the exact minimum from above
      Rng rng = Rng::substream(vp.seed ^ 0xD1CEC7ULL, points[i].attempt_index);
      for (int probe = 0; probe < vp.direction_probes; ++probe) {
        CVec V = rng.unit_complex_vector(spec.n);
        double s = theorem_slack(kind, spec, points[i].z, V, vp.gamma);
        if (s < ps.slack) {  // cannot happen beyond rounding; keep the smaller
          ps.slack = s;
          ps.direction = V;
        }
      }
      ps.delta = df.delta;
      ps.z = points[i].z;
      ps.ok = true;
    } catch (const Error& e) {
      if (e.code() != Err::ambiguity && e.code() != Err::accuracy) throw;
      ps.ok = false;
    }
  });

  rep.min_slack = 1e300;
  double worst_scale = 0.0;
  for (const PerSample& ps : results) {
    if (!ps.ok) {
      ++rep.skipped_inaccurate;
      continue;
    }
    worst_scale = std::max(worst_scale, ps.form_scale);
    if (vp.keep_rows) rep.rows.push_back({ps.z, ps.delta, ps.slack});
    if (ps.slack < rep.min_slack) {
      rep.min_slack = ps.slack;
      rep.argmin_point = ps.z;
      rep.argmin_direction = ps.direction;
    }
  }
  if (rep.min_slack == 1e300) fail(Err::sampling, "no usable samples for verification");
  rep.form_scale = worst_scale;
  rep.tol_abs = vp.tol * (1.0 + worst_scale);
  rep.pass = rep.min_slack >= -rep.tol_abs;

  // hypothesis flags at projected boundary points (reported, not enforced)
  int n_hyp = std::min<int>(vp.hypothesis_samples, static_cast<int>(points.size()));
  std::vector<int> flags(n_hyp, -1);
  parallel_for(n_hyp, vp.threads, [&](int i) {
    try {
      PositivityReport pr = classify_boundary(spec, points[i].boundary, vp.gamma);
      bool flag = false;
      switch (kind) {
        case TheoremKind::oka: flag = pr.pseudoconvex; break;
        case TheoremKind::convex: flag = pr.convex; break;
        case TheoremKind::cconvex: flag = pr.c_convex; break;
        case TheoremKind::psh: flag = pr.min_eig_L_RT >= -pr.tol_used; break;
        case TheoremKind::gamma: flag = pr.gamma_psh; break;
      }
      flags[i] = flag ? 1 : 0;
    } catch (const Error&) {
      flags[i] = -1;
    }
  });
  int got = 0, yes = 0;
  for (int f : flags) {
    if (f >= 0) ++got;
    if (f == 1) ++yes;
  }
  rep.hypothesis_checked = got;
  rep.hypothesis_fraction = got > 0 ? static_cast<double>(yes) / got : 0.0;
  switch (kind) {
    case TheoremKind::oka: rep.hypothesis_flag = "pseudoconvex"; break;
    case TheoremKind::convex: rep.hypothesis_flag = "convex"; break;
    case TheoremKind::cconvex: rep.hypothesis_flag = "c_convex"; break;
    case TheoremKind::psh: rep.hypothesis_flag = "levi_nonneg_on_RT"; break;
    case TheoremKind::gamma: rep.hypothesis_flag = "gamma_psh"; break;
  }

  rep.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace

TheoremReport verify_theorem(TheoremKind kind, const DomainSpec& spec, const VerifyParams& vp) {
  double shell = vp.shell > 0.0 ? vp.shell : spec.shell_width;
  TheoremReport rep = run_verify_once(kind, spec, vp, shell);
  if (!rep.pass && vp.certify_shell) {
    double w = shell;
    for (int halving = 0; halving < 8 && !rep.pass; ++halving) {
      w *= 0.5;
      try {
        TheoremReport narrower = run_verify_once(kind, spec, vp, w);
        if (narrower.pass) {
          narrower.certified_shell = w;
          // keep the original failing width in the headline fields
          narrower.shell = shell;
          return narrower;
        }
      } catch (const Error& e) {
        if (e.code() != Err::sampling) throw;
        break;  // shell too thin to populate; stop narrowing
      }
    }
  }
  return rep;
}

// ---- Diederich-Fornaess machinery --------------------------------------------

double df_exponent(double gamma) {
  if (gamma < 0.0) fail(Err::argument, "df_exponent: gamma must be nonnegative");
  if (std::isinf(gamma)) return 1.0 - 1e-16;
  // 1 - 2/(2+g^2), written cancellation-free
  double eta = gamma * gamma / (2.0 + gamma * gamma);
  return std::clamp(eta, 0.0, 1.0 - 1e-16);
}

double levi_power(const DomainSpec& spec, const Vec& q, double eta, const CVec& V,
                  const ProjectionParams& pp) {
  if (!(eta > 0.0 && eta <= 1.0)) fail(Err::argument, "levi_power: eta must lie in (0,1]");
  DForms df = d_forms(spec, q, pp);
  if (df.delta >= 0.0) fail(Err::domain, "levi_power: point must be strictly inside (delta < 0)");
  double u = -df.delta;
  double bracket = u * std::real(apply_form(df.f_delta, FormKind::L, V, V)) +
                   (1.0 - eta) * std::norm(complex_pairing(df.grad_delta, V));
  return eta * std::pow(u, eta - 2.0) * bracket;
}

SlackMin levi_power_min(const DomainSpec& spec, const Vec& q, double eta,
                        const ProjectionParams& pp) {
  if (!(eta > 0.0 && eta <= 1.0)) fail(Err::argument, "levi_power_min: eta must lie in (0,1]");
  DForms df = d_forms(spec, q, pp);
  if (df.delta >= 0.0)
    fail(Err::domain, "levi_power_min: point must be strictly inside (delta < 0)");
  double u = -df.delta;
  double outer = eta * std::pow(u, eta - 2.0);
  CVec t = complex_gradient(df.grad_delta);
  const int n = spec.n;
  CMat F(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      F(k, l) = outer * (u * df.f_delta.L(k, l) + (1.0 - eta) * t[k] * std::conj(t[l]));
  Mat M = hermitian_real_embedding(F);
  EigenSystem es = jacobi_eigen(M);
  SlackMin out;
  out.value = es.values[0];
  Vec x(M.rows);
  for (int i = 0; i < M.rows; ++i) x[i] = es.vectors(i, 0);
  out.direction = to_complex(x);
  out.form_scale = std::max(std::fabs(es.values.front()), std::fabs(es.values.back()));
  return out;
}

DfResult df_verify(const DomainSpec& spec, const DfParams& dp) {
  const auto t0 = std::chrono::steady_clock::now();
  DfResult out;
  out.domain = spec.name;
  out.shell = dp.shell > 0.0 ? dp.shell : spec.shell_width;
  out.n_boundary = dp.n_boundary;
  out.n_shell = dp.n_shell;
  out.seed = dp.seed;

  int amb = 0, inacc = 0;
  auto bpoints = ShellSampler::draw(spec, out.shell, "inside", dp.n_boundary, dp.seed, dp.threads,
                                    &amb, &inacc);

  struct BRes {
    bool ok = false;
    double gamma = 0.0;
    bool psc = false;
    Vec q;
  };
  std::vector<BRes> bres(bpoints.size());
  parallel_for(static_cast<int>(bpoints.size()), dp.threads, [&](int i) {
    try {
      PositivityReport pr = classify_boundary(spec, bpoints[i].boundary, 0.0);
      bres[i].gamma = pr.max_gamma;
      bres[i].psc = pr.pseudoconvex;
      bres[i].q = bpoints[i].boundary.q;
      bres[i].ok = true;
    } catch (const Error&) {
      bres[i].ok = false;
    }
  });

  out.gamma_star = 1e300;
  int got = 0, psc = 0;
  for (const BRes& b : bres) {
    if (!b.ok) continue;
    ++got;
    if (b.psc) ++psc;
    if (b.gamma < out.gamma_star) {
      out.gamma_star = b.gamma;
      out.worst_boundary_point = b.q;
    }
  }
  if (got == 0) fail(Err::sampling, "df_verify: no usable boundary samples");
  out.pseudoconvex_fraction = static_cast<double>(psc) / got;
  out.eta = df_exponent(out.gamma_star);

  if (!(out.gamma_star > 0.0) || !(out.eta > 0.0)) {
    out.certified = false;
    out.eta = 0.0;
    out.note = "no positive exponent certified (aperture collapses at a sampled boundary point)";
    out.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

  auto spoints = ShellSampler::draw(spec, out.shell, "inside", dp.n_shell, dp.seed ^ 0xD1F2ULL,
                                    dp.threads, &amb, &inacc);
  struct SRes {
    bool ok = false;
    double value = 0.0;
    double scale = 0.0;
    CVec dir;
  };
  std::vector<SRes> sres(spoints.size());
  parallel_for(static_cast<int>(spoints.size()), dp.threads, [&](int i) {
    try {
      SlackMin sm = levi_power_min(spec, spoints[i].z, out.eta);
      sres[i].value = sm.value;
      sres[i].scale = sm.form_scale;
      sres[i].dir = sm.direction;
      sres[i].ok = true;
    } catch (const Error&) {
      sres[i].ok = false;
    }
  });
  out.psh_min = 1e300;
  double worst_scale = 0.0;
  for (size_t i = 0; i < sres.size(); ++i) {
    if (!sres[i].ok) continue;
    worst_scale = std::max(worst_scale, sres[i].scale);
    if (sres[i].value < out.psh_min) {
      out.psh_min = sres[i].value;
      out.argmin_point = spoints[i].z;
      out.argmin_direction = sres[i].dir;
    }
  }
  if (out.psh_min == 1e300) fail(Err::sampling, "df_verify: no usable shell samples");
  out.psh_tol_abs = dp.tol * (1.0 + worst_scale);
  out.certified = out.psh_min >= -out.psh_tol_abs;
  out.note = out.certified ? "certified" : "power-function positivity failed on the shell";
  out.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

ConeMinimizerCheck cone_minimizer_check(double v, double t, double gamma) {
  if (!(gamma > 0.0)) fail(Err::argument, "cone_minimizer_check: gamma must be positive");
  if (!(v >= 0.0)) fail(Err::argument, "cone_minimizer_check: vprime_norm must be nonnegative");
  if (t < gamma * v - 1e-12 * (1.0 + t))
    fail(Err::argument, "cone_minimizer_check: need t >= gamma * vprime_norm");

  ConeMinimizerCheck out;
  out.closed_form = 2.0 * t * t / (2.0 + gamma * gamma);
  if (t != 0.0) {
    double r = 1.0 - v * gamma / t;
    out.closed_form = 2.0 * t * t / (2.0 + gamma * gamma) * r * r;
  }
  out.c0 = gamma * (t * gamma + 2.0 * v) / (2.0 + gamma * gamma);

  // blind numeric route: golden-section in w on both sign branches of c
  auto value = [&](double w, double sign) {
    double dc = t - sign * gamma * w;
    double dv = v - w;
    return 2.0 * dv * dv + dc * dc;
  };
  double best = 1e300;
  const double ghi = v + t / std::max(gamma, 1e-6) + 1.0;
  const double gr = 0.6180339887498949;
  for (double sign : {1.0, -1.0}) {
    double lo = 0.0, hi = ghi;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = value(x1, sign), f2 = value(x2, sign);
    for (int it = 0; it < 160; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = value(x1, sign);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = value(x2, sign);
      }
    }
    best = std::min(best, std::min(f1, f2));
    best = std::min(best, value(0.0, sign));
  }
  out.numeric_min = best;
  return out;
}

}  // namespace dk
