#include "deltakit/report.hpp"

#include <chrono>
#include <cstdio>

#include "deltakit/parallel.hpp"
#include "json.hpp"

namespace dk {

using njson = nlohmann::ordered_json;

const Defaults& defaults() {
  static const Defaults d;
  return d;
}

namespace {

njson vec_json(const Vec& v) {
  njson a = njson::array();
  for (double x : v) a.push_back(x);
  return a;
}

njson cvec_json(const CVec& v) {
  njson a = njson::array();
  for (const cplx& z : v) a.push_back({std::real(z), std::imag(z)});
  return a;
}

njson mat_json(const Mat& m) {
  njson rows = njson::array();
  for (int i = 0; i < m.rows; ++i) {
    njson r = njson::array();
    for (int j = 0; j < m.cols; ++j) r.push_back(m(i, j));
    rows.push_back(r);
  }
  return rows;
}

njson cmat_json(const CMat& m) {
  njson rows = njson::array();
  for (int i = 0; i < m.rows; ++i) {
    njson r = njson::array();
    for (int j = 0; j < m.cols; ++j) r.push_back({std::real(m(i, j)), std::imag(m(i, j))});
    rows.push_back(r);
  }
  return rows;
}

njson defaults_json() {
  const Defaults& d = defaults();
  njson j;
  j["shell_factor"] = d.shell_factor;
  j["samples"] = d.samples;
  j["tol"] = d.tol;
  j["gamma_cap"] = d.gamma_cap;
  j["cone_resolution"] = d.cone_resolution;
  j["seed"] = d.seed;
  j["classify_eps"] = d.classify_eps;
  j["max_gamma_tol"] = d.max_gamma_tol;
  j["newton_tol"] = d.newton_tol;
  j["newton_max_iters"] = d.newton_max_iters;
  j["multistart_seeds"] = d.multistart_seeds;
  j["ambiguity_tol"] = d.ambiguity_tol;
  return j;
}

void attach_meta(njson& j, bool with_meta, double runtime_sec) {
  if (!with_meta) return;
  njson meta;
  auto now = std::chrono::system_clock::now();
  meta["unix_time"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  meta["runtime_sec"] = runtime_sec;
  j["meta"] = meta;
}

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

njson positivity_json(const PositivityReport& pr) {
  njson j;
  j["point"] = vec_json(pr.p);
  j["min_eig_L_CT"] = pr.min_eig_L_CT;
  j["min_eig_H_RT"] = pr.min_eig_H_RT;
  j["min_eig_H_CT"] = pr.min_eig_H_CT;
  j["min_eig_L_RT"] = pr.min_eig_L_RT;
  j["gamma_query"] = pr.gamma_query;
  j["cone_min_at_query"] = pr.cone_min_at_query;
  j["max_gamma"] = pr.max_gamma;
  j["eta"] = pr.eta;
  j["flags"] = {{"convex", pr.convex},
                {"pseudoconvex", pr.pseudoconvex},
                {"c_convex", pr.c_convex},
                {"gamma_psh", pr.gamma_psh}};
  j["tol_used"] = pr.tol_used;
  return j;
}

}  // namespace

std::string report_json(const TheoremReport& rep, bool with_meta, bool pretty) {
  njson j;
  j["report"] = "verify";
  j["kind"] = rep.kind;
  j["domain"] = rep.domain;
  j["side"] = rep.side;
  if (rep.kind == "gamma") j["gamma"] = rep.gamma;
  j["shell"] = rep.shell;
  j["n_samples"] = rep.n_samples;
  j["seed"] = rep.seed;
  j["tol"] = rep.tol;
  j["tol_abs"] = rep.tol_abs;
  j["min_slack"] = rep.min_slack;
  j["argmin_point"] = vec_json(rep.argmin_point);
  j["argmin_direction"] = cvec_json(rep.argmin_direction);
  j["pass"] = rep.pass;
  j["form_scale"] = rep.form_scale;
  j["skipped_ambiguous"] = rep.skipped_ambiguous;
  j["skipped_inaccurate"] = rep.skipped_inaccurate;
  j["hypothesis"] = {{"flag", rep.hypothesis_flag},
                     {"fraction", rep.hypothesis_fraction},
                     {"checked", rep.hypothesis_checked}};
  if (rep.certified_shell > 0.0) j["certified_shell"] = rep.certified_shell;
  j["defaults"] = defaults_json();
  attach_meta(j, with_meta, rep.runtime_sec);
  return pretty ? j.dump(2) : j.dump();
}

std::string report_csv(const TheoremReport& rep) {
  std::string out;
  const int m = rep.argmin_point.empty() ? 0 : static_cast<int>(rep.argmin_point.size());
  for (int i = 1; i <= m; ++i) out += "x" + std::to_string(i) + ",";
  out += "delta,slack\n";
  for (const SampleRow& r : rep.rows) {
    for (double x : r.z) out += num17(x) + ",";
    out += num17(r.delta) + "," + num17(r.slack) + "\n";
  }
  return out;
}

std::string df_json(const DfResult& res, bool with_meta, bool pretty) {
  njson j;
  j["report"] = "df";
  j["domain"] = res.domain;
  j["shell"] = res.shell;
  j["n_boundary"] = res.n_boundary;
  j["n_shell"] = res.n_shell;
  j["seed"] = res.seed;
  j["gamma_star"] = res.gamma_star;
  j["eta"] = res.eta;
  j["certified"] = res.certified;
  j["note"] = res.note;
  j["pseudoconvex_fraction"] = res.pseudoconvex_fraction;
  j["worst_boundary_point"] = vec_json(res.worst_boundary_point);
  if (res.certified || res.psh_min != 0.0) {
    j["psh_min"] = res.psh_min;
    j["psh_tol_abs"] = res.psh_tol_abs;
    j["argmin_point"] = vec_json(res.argmin_point);
    j["argmin_direction"] = cvec_json(res.argmin_direction);
  }
  j["defaults"] = defaults_json();
  attach_meta(j, with_meta, res.runtime_sec);
  return pretty ? j.dump(2) : j.dump();
}

std::string analyze_json(const DomainSpec& spec, const Vec& point, double gamma_query,
                         bool with_meta, bool pretty) {
  const auto t0 = std::chrono::steady_clock::now();
  njson j;
  j["report"] = "analyze";
  j["domain"] = spec.name;
  j["point"] = vec_json(point);

  BoundaryPoint bp = project_to_boundary(spec, point);
  double dist = norm2(vsub(point, bp.q));
  double delta = eval_value(spec, point) < 0.0 ? -dist : dist;
  j["delta"] = delta;
  j["boundary_point"] = {{"q", vec_json(bp.q)},
                         {"normal", vec_json(bp.normal)},
                         {"residual", bp.residual},
                         {"newton_iters", bp.newton_iters}};
  j["grad_delta"] = vec_json(bp.normal);

  if (dist > 1e-10 * (1.0 + spec.scale)) {
    HessianForms fd = delta_hessian(spec, point);
    j["delta_hessian"] = {{"H", mat_json(fd.H)}, {"L", cmat_json(fd.L)}, {"Q", cmat_json(fd.Q)}};
    DForms df = d_forms(spec, point);
    j["D_forms"] = {{"D", df.D},
                    {"grad_D", vec_json(df.grad_D)},
                    {"H", mat_json(df.f_D.H)},
                    {"L", cmat_json(df.f_D.L)},
                    {"Q", cmat_json(df.f_D.Q)}};
  }

  PositivityReport pr = classify_boundary(spec, bp, gamma_query);
  j["positivity"] = positivity_json(pr);
  j["defaults"] = defaults_json();
  attach_meta(j, with_meta,
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return pretty ? j.dump(2) : j.dump();
}

ClassifySweep classify_sweep(const DomainSpec& spec, int n_samples, uint64_t seed,
                             double gamma_query, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  ClassifySweep sw;
  sw.domain = spec.name;
  sw.n_samples = n_samples;
  sw.seed = seed;
  sw.gamma_query = gamma_query;

  int amb = 0, inacc = 0;
  auto pts = ShellSampler::draw(spec, spec.shell_width, "inside", n_samples, seed, threads, &amb,
                                &inacc);
  sw.points.resize(pts.size());
  std::vector<char> ok(pts.size(), 0);
  parallel_for(static_cast<int>(pts.size()), threads, [&](int i) {
    try {
      sw.points[i] = classify_boundary(spec, pts[i].boundary, gamma_query);
      ok[i] = 1;
    } catch (const Error&) {
      ok[i] = 0;
    }
  });
  std::vector<PositivityReport> kept;
  for (size_t i = 0; i < pts.size(); ++i)
    if (ok[i]) kept.push_back(std::move(sw.points[i]));
  sw.points = std::move(kept);
  sw.runtime_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sw;
}

std::string classify_json(const ClassifySweep& sweep, bool with_meta, bool per_point,
                          bool pretty) {
  njson j;
  j["report"] = "classify";
  j["domain"] = sweep.domain;
  j["n_samples"] = sweep.n_samples;
  j["n_classified"] = sweep.points.size();
  j["seed"] = sweep.seed;
  j["gamma_query"] = sweep.gamma_query;

  int conv = 0, psc = 0, ccvx = 0, gpsh = 0;
  double min_gamma = 1e300, min_L_CT = 1e300, min_H_RT = 1e300;
  bool chain_ok = true;
  for (const PositivityReport& p : sweep.points) {
    conv += p.convex;
    psc += p.pseudoconvex;
    ccvx += p.c_convex;
    gpsh += p.gamma_psh;
    min_gamma = std::min(min_gamma, p.max_gamma);
    min_L_CT = std::min(min_L_CT, p.min_eig_L_CT);
    min_H_RT = std::min(min_H_RT, p.min_eig_H_RT);
    if ((p.convex && !p.c_convex) || (p.c_convex && !p.pseudoconvex)) chain_ok = false;
  }
  const double n = std::max<size_t>(sweep.points.size(), 1);
  j["summary"] = {{"convex_fraction", conv / n},
                  {"pseudoconvex_fraction", psc / n},
                  {"c_convex_fraction", ccvx / n},
                  {"gamma_psh_fraction", gpsh / n},
                  {"min_max_gamma", min_gamma},
                  {"min_eig_L_CT", min_L_CT},
                  {"min_eig_H_RT", min_H_RT},
                  {"flag_chain_ok", chain_ok}};
  if (per_point) {
    njson arr = njson::array();
    for (const PositivityReport& p : sweep.points) arr.push_back(positivity_json(p));
    j["points"] = arr;
  }
  j["defaults"] = defaults_json();
  attach_meta(j, with_meta, sweep.runtime_sec);
  return pretty ? j.dump(2) : j.dump();
}

std::string sweep_csv(const ClassifySweep& sweep) {
  std::string out;
  const int m = sweep.points.empty() ? 0 : static_cast<int>(sweep.points.front().p.size());
  for (int i = 1; i <= m; ++i) out += "x" + std::to_string(i) + ",";
  out += "min_eig_L_CT,min_eig_H_RT,max_gamma,eta\n";
  for (const PositivityReport& p : sweep.points) {
    for (double x : p.p) out += num17(x) + ",";
    out += num17(p.min_eig_L_CT) + "," + num17(p.min_eig_H_RT) + "," + num17(p.max_gamma) + "," +
           num17(p.eta) + "\n";
  }
  return out;
}

std::string catalog_json(bool pretty) {
  njson arr = njson::array();
  for (const CatalogEntry& e : catalog()) {
    njson j;
    j["name"] = e.name;
    j["summary"] = e.summary;
    j["params"] = e.params_doc;
    DomainSpec s = make_catalog_domain(e.name);
    j["n"] = s.n;
    j["expression"] = s.expr_src;
    j["shell_width"] = s.shell_width;
    j["scale"] = s.scale;
    arr.push_back(j);
  }
  njson root;
  root["report"] = "catalog";
  root["domains"] = arr;
  return pretty ? root.dump(2) : root.dump();
}

}  // namespace dk
