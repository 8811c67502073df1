// deltakit command-line tool. Talks to the shared library exclusively
// through the C API in deltakit.h; all reports arrive as JSON/CSV strings.
//
// Exit codes: 0 success / verification passed, 1 verification failed,
// 2 usage or spec error, 3 numerical error (convergence, ambiguity, ...).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "deltakit.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(dk_status s) {
  switch (s) {
    case DK_OK: return kExitPass;
    case DK_ERR_ARGUMENT:
    case DK_ERR_PARSE:
    case DK_ERR_IO:
    case DK_ERR_DOMAIN: return kExitUsage;
    default: return kExitNumerical;
  }
}

struct StringOut {
  char* ptr = nullptr;
  ~StringOut() { dk_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

struct DomainHandle {
  dk_domain* d = nullptr;
  ~DomainHandle() { dk_domain_destroy(d); }
};

int report_error(dk_status s) {
  std::cerr << "error (" << dk_status_name(s) << "): " << dk_last_error() << "\n";
  return exit_code_for(s);
}

// A domain argument is a catalog name unless it looks like a file.
int open_domain(const std::string& source, const std::string& params, DomainHandle& h) {
  dk_status s;
  if (std::filesystem::exists(source) || source.find('/') != std::string::npos ||
      (source.size() > 5 && source.substr(source.size() - 5) == ".json")) {
    s = dk_domain_create_from_file(source.c_str(), &h.d);
  } else {
    s = dk_domain_create(source.c_str(), params.empty() ? "{}" : params.c_str(), &h.d);
  }
  return s == DK_OK ? -1 : report_error(s);
}

bool parse_point(const std::string& text, int m, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      return false;
    }
  }
  return static_cast<int>(out.size()) == m;
}

int write_output(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload << "\n";
    return kExitPass;
  }
  std::filesystem::path p(out_path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("DELTAKIT_OUT_DIR")) p = std::filesystem::path(dir) / p;
  }
  std::ofstream f(p);
  if (!f) {
    std::cerr << "error (io): cannot write '" << p.string() << "'\n";
    return kExitUsage;
  }
  f << payload << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"signed-distance positivity analysis for domains in C^n"};
  app.require_subcommand(1);

  std::string domain, params, out_path, format = "json", side = "inside", point_text;
  double shell = 0.0, tol = 0.0, gamma = 1.0;
  bool gamma_given = false;
  int samples = 0, threads = 1, boundary = 0;
  uint64_t seed = 42;
  bool no_meta = false, per_point = false, certify = false;

  auto add_common = [&](CLI::App* cmd, bool with_domain) {
    if (with_domain)
      cmd->add_option("domain", domain, "catalog name or spec file path")->required();
    cmd->add_option("--params", params, "catalog parameter overrides, JSON object");
    cmd->add_option("--out", out_path, "output path (relative paths honor DELTAKIT_OUT_DIR)");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--threads", threads, "worker threads (output is thread-count invariant)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-meta", no_meta, "omit timestamp/runtime metadata");
  };

  CLI::App* c_catalog = app.add_subcommand("catalog", "list built-in domains");
  c_catalog->add_option("--out", out_path, "output path");

  CLI::App* c_analyze = app.add_subcommand("analyze", "delta, forms and classification at a point");
  add_common(c_analyze, true);
  c_analyze->add_option("--point", point_text, "comma-separated 2n coordinates")->required();
  c_analyze->add_option("--gamma", gamma, "aperture for the cone test");

  CLI::App* c_classify = app.add_subcommand("classify", "boundary classification sweep");
  add_common(c_classify, true);
  c_classify->add_option("--samples", samples, "boundary sample count")->check(CLI::PositiveNumber);
  c_classify->add_option("--gamma", gamma, "aperture for the cone flag")
      ->check(CLI::NonNegativeNumber);
  c_classify->add_flag("--per-point", per_point, "include per-point reports");

  CLI::App* c_verify = app.add_subcommand("verify", "slack verification sweep for one statement");
  std::string kind;
  c_verify->add_option("kind", kind, "oka | convex | cconvex | psh | gamma")->required();
  add_common(c_verify, true);
  c_verify->add_option("--samples", samples, "shell sample count (default 500)")
      ->check(CLI::PositiveNumber);
  c_verify->add_option("--shell", shell, "shell width (default from the domain)")
      ->check(CLI::PositiveNumber);
  c_verify->add_option("--tol", tol, "relative slack tolerance (default 1e-8)")
      ->check(CLI::PositiveNumber);
  c_verify->add_option("--gamma", gamma, "aperture (kind = gamma)")
      ->check(CLI::NonNegativeNumber);
  c_verify->add_option("--side", side, "inside | outside")
      ->check(CLI::IsMember({"inside", "outside"}));
  c_verify->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  c_verify->add_flag("--certify-shell", certify, "halve the shell until the check passes");

  CLI::App* c_df = app.add_subcommand("df", "Diederich-Fornaess exponent certification");
  c_df->add_option("domain", domain, "catalog name or spec file path");
  c_df->add_option("--params", params, "catalog parameter overrides, JSON object");
  c_df->add_option("--gamma", gamma, "print eta for this aperture and exit")
      ->each([&](const std::string&) { gamma_given = true; });
  c_df->add_option("--shell", shell, "shell width")->check(CLI::PositiveNumber);
  c_df->add_option("--boundary", boundary, "boundary sample count (default 200)")
      ->check(CLI::PositiveNumber);
  c_df->add_option("--samples", samples, "shell sample count (default 200)")
      ->check(CLI::PositiveNumber);
  c_df->add_option("--out", out_path, "output path");
  c_df->add_option("--seed", seed, "RNG seed");
  c_df->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  c_df->add_flag("--no-meta", no_meta, "omit metadata");

  CLI::App* c_sweep = app.add_subcommand("sweep", "per-boundary-point CSV of eigenvalues and apertures");
  add_common(c_sweep, true);
  c_sweep->add_option("--samples", samples, "boundary sample count")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  if (c_catalog->parsed()) {
    StringOut s;
    dk_status st = dk_catalog_json(&s.ptr);
    if (st != DK_OK) return report_error(st);
    return write_output(s.str(), out_path);
  }

  if (c_df->parsed() && gamma_given && domain.empty()) {
    double eta = dk_df_exponent(gamma);
    if (std::isnan(eta)) {
      std::cerr << "error (argument): gamma must be nonnegative\n";
      return kExitUsage;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "{\"gamma\": %.17g, \"eta\": %.17g}", gamma, eta);
    return write_output(buf, out_path);
  }

  if (domain.empty()) {
    std::cerr << "error (argument): a domain is required\n";
    return kExitUsage;
  }
  DomainHandle dom;
  if (int rc = open_domain(domain, params, dom); rc >= 0) return rc;
  const int m = 2 * dk_domain_complex_dim(dom.d);

  if (c_analyze->parsed()) {
    std::vector<double> pt;
    if (!parse_point(point_text, m, pt)) {
      std::cerr << "error (argument): --point needs " << m << " comma-separated coordinates\n";
      return kExitUsage;
    }
    StringOut s;
    dk_status st = dk_analyze_json(dom.d, pt.data(), gamma, !no_meta, &s.ptr);
    if (st != DK_OK) return report_error(st);
    return write_output(s.str(), out_path);
  }

  if (c_classify->parsed()) {
    StringOut s;
    int n = samples > 0 ? samples : 100;
    dk_status st = dk_classify_json(dom.d, n, seed, gamma, threads, !no_meta, per_point, &s.ptr);
    if (st != DK_OK) return report_error(st);
    return write_output(s.str(), out_path);
  }

  if (c_verify->parsed()) {
    StringOut json, csv;
    int pass = 0;
    const bool want_csv = format == "csv";
    dk_status st = dk_verify_json(dom.d, kind.c_str(), gamma, side.c_str(), shell, samples, seed,
                                  tol, threads, certify, !no_meta, &json.ptr,
                                  want_csv ? &csv.ptr : nullptr, &pass);
    if (st != DK_OK) return report_error(st);
    int rc = write_output(want_csv ? csv.str() : json.str(), out_path);
    if (rc != kExitPass) return rc;
    return pass ? kExitPass : kExitFail;
  }

  if (c_df->parsed()) {
    StringOut s;
    int certified = 0;
    dk_status st = dk_df_json(dom.d, shell, boundary, samples, seed, threads, !no_meta, &s.ptr,
                              &certified);
    if (st != DK_OK) return report_error(st);
    int rc = write_output(s.str(), out_path);
    if (rc != kExitPass) return rc;
    return certified ? kExitPass : kExitFail;
  }

  if (c_sweep->parsed()) {
    StringOut s;
    int n = samples > 0 ? samples : 100;
    dk_status st = dk_sweep_csv(dom.d, n, seed, threads, &s.ptr);
    if (st != DK_OK) return report_error(st);
    return write_output(s.str(), out_path);
  }

  std::cerr << "error (argument): unknown command\n";
  return kExitUsage;
}
