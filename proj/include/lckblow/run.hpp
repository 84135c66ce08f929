#pragma once

// Configured end-to-end runs: validation, the pipeline on Hopf annulus data,
// report files and parameter sweeps. Shared by the command-line tool and the
// acceptance suite.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lckblow/construction.hpp"
#include "lckblow/lck_data.hpp"
#include "lckblow/report.hpp"

namespace lckblow {

enum ExitCode : int { kExitPass = 0, kExitChecksFailed = 1, kExitBadConfig = 2, kExitInternal = 3 };

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::size_t n = 2;
  double r = 0.05;
  double R = 20.0;
  std::vector<std::complex<double>> P;  // empty: (1, 0, ..., 0)
  std::optional<double> polyradius;     // default: see resolved()
  std::optional<double> eps;            // default: polyradius / 8
  std::size_t samples_per_stratum = 200;
  std::uint64_t seed = 1;
  double tol_analytic = 1e-10;
  double tol_glued = 1e-8;
  double delta = 1e-8;
  std::optional<double> N_override;
  double chi_inner = 3.0;  // units of eps
  double chi_outer = 4.0;

  // Fills in defaults: P = (1, 0, ..., 0), the largest polyradius up to 0.5
  // whose polydisc keeps a 5% margin inside the annulus, eps = polyradius/8.
  RunConfig resolved() const {
    RunConfig c = *this;
    if (c.P.empty()) {
      c.P.assign(c.n, 0.0);
      if (c.n > 0) c.P[0] = 1.0;
    }
    if (!c.polyradius) {
      double pn = 0.0;
      for (const auto& z : c.P) pn += std::norm(z);
      pn = std::sqrt(pn);
      const double room = std::min(pn - c.r, c.R - pn);
      c.polyradius = std::min(0.5, 0.95 * room / std::sqrt(static_cast<double>(std::max<std::size_t>(c.n, 1))));
    }
    if (!c.eps) c.eps = *c.polyradius / 8.0;
    return c;
  }

  // Throws ConfigError describing the first violated constraint.
  void validate() const {
    const RunConfig c = resolved();
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (c.n < 2 || c.n > 6) fail("n must be in [2, 6]");
    if (!(c.r > 0.0) || !(c.r < c.R)) fail("annulus radii need 0 < r < R");
    if (c.P.size() != c.n) fail("blow-up centre must have n coordinates");
    double pn = 0.0;
    for (const auto& z : c.P) pn += std::norm(z);
    pn = std::sqrt(pn);
    if (!(pn > c.r && pn < c.R)) fail("blow-up centre must lie inside the annulus");
    const double rho = *c.polyradius;
    if (!(rho > 0.0)) fail("polyradius must be positive");
    const double reach = rho * std::sqrt(static_cast<double>(c.n));
    if (!(pn - reach > c.r && pn + reach < c.R)) fail("coordinate polydisc leaves the annulus");
    const double eps = *c.eps;
    if (!(eps > 0.0)) fail("eps must be positive");
    if (!(2.0 * eps < rho)) fail("need 2*eps < polyradius");
    if (!(c.chi_inner > 0.0 && c.chi_inner < c.chi_outer)) fail("need 0 < chi-inner < chi-outer");
    if (!(c.chi_outer * eps < rho)) fail("gauge cutoff support must fit in the polydisc");
    if (!(4.0 * eps < rho)) fail("need 4*eps < polyradius for the sampling strata");
    if (c.samples_per_stratum < 1) fail("samples per stratum must be at least 1");
    if (!(c.tol_analytic > 0.0) || !(c.tol_glued > 0.0)) fail("tolerances must be positive");
    if (!(c.delta >= 0.0)) fail("delta must be non-negative");
    if (c.N_override && !(*c.N_override >= 0.0)) fail("N must be non-negative");
  }
};

inline nlohmann::json to_json(const RunConfig& cfg) {
  const RunConfig c = cfg.resolved();
  nlohmann::json P = nlohmann::json::array();
  for (const auto& z : c.P) P.push_back({z.real(), z.imag()});
  nlohmann::json j = {{"n", c.n},
                      {"r", c.r},
                      {"R", c.R},
                      {"P", P},
                      {"polyradius", *c.polyradius},
                      {"eps", *c.eps},
                      {"samples_per_stratum", c.samples_per_stratum},
                      {"seed", c.seed},
                      {"tol_analytic", c.tol_analytic},
                      {"tol_glued", c.tol_glued},
                      {"delta", c.delta},
                      {"chi_inner", c.chi_inner},
                      {"chi_outer", c.chi_outer}};
  j["N_override"] = c.N_override ? nlohmann::json(*c.N_override) : nlohmann::json(nullptr);
  return j;
}

struct RunOutcome {
  RunConfig config;  // resolved
  FindNResult search;
  double N = 0.0;
  bool N_from_search = true;
  std::optional<ChartPoint> search_witness;
  VerificationReport report;
  double seconds = 0.0;

  int exit_code() const { return report.pass() ? kExitPass : kExitChecksFailed; }
};

// Runs the whole construction for validated configuration; throws ConfigError
// for invalid input.
inline RunOutcome run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  RunOutcome out;
  out.config = cfg.resolved();
  const RunConfig& c = out.config;

  Region region{c.P, *c.polyradius};
  Construction<HopfAnnulus> cons(HopfAnnulus(c.n, c.r, c.R), region, *c.eps,
                                 GaugeOptions{c.chi_inner, c.chi_outer});
  SamplingPlan plan;
  plan.n = c.n;
  plan.eps = *c.eps;
  plan.polyradius = *c.polyradius;
  plan.per_stratum = c.samples_per_stratum;
  plan.seed = c.seed;
  const std::vector<PointEval> evals = cons.evaluate_all(make_samples(plan));

  out.search = find_N(evals, c.delta);
  if (!evals.empty()) out.search_witness = evals[out.search.witness].sample.point;
  if (c.N_override) {
    out.N = *c.N_override;
    out.N_from_search = false;
  } else {
    out.N = out.search.N.value_or(out.search.tried_up_to);
  }

  VerifyOptions opt;
  opt.tol_analytic = c.tol_analytic;
  opt.tol_glued = c.tol_glued;
  opt.delta = c.delta;
  opt.seed = c.seed;
  out.report = verify(cons, evals, out.N, opt);
  if (!c.N_override && !out.search.N) {
    CheckResult miss;
    miss.name = "find_N_terminated";
    miss.tolerance = out.search.tried_up_to;
    miss.worst_value = out.search.witness_margin;
    miss.worst_sample = out.search_witness;
    miss.pass = false;
    out.report.checks.push_back(miss);
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// The report document. Everything except "generated_at" is a deterministic
// function of the configuration.
inline nlohmann::json report_document(const RunOutcome& o, bool with_timestamp) {
  nlohmann::json search = {{"source", o.N_from_search ? "search" : "override"},
                           {"found", o.search.N.has_value()},
                           {"tried_up_to", o.search.tried_up_to},
                           {"witness_margin", number_to_json(o.search.witness_margin)}};
  search["N"] = o.search.N ? nlohmann::json(*o.search.N) : nlohmann::json(nullptr);
  search["witness"] = o.search_witness ? to_json(*o.search_witness) : nlohmann::json(nullptr);
  nlohmann::json doc = {{"schema_version", kReportSchemaVersion},
                        {"config", to_json(o.config)},
                        {"find_N", search},
                        {"report", to_json(o.report)},
                        {"status", o.report.pass() ? "pass" : "fail"}};
  if (with_timestamp) doc["generated_at"] = utc_timestamp();
  return doc;
}

inline void print_summary(const RunOutcome& o, std::ostream& os) {
  const auto& r = o.report;
  os << "n = " << r.n << ", eps = " << r.eps << ", N = " << r.N
     << (o.N_from_search ? " (search)" : " (override)") << "\n";
  for (const auto& [name, count] : r.stratum_counts) os << "  samples " << name << ": " << count << "\n";
  os << "  min eigenvalue of N omega' - Omega_E: " << r.min_eigenvalue << "\n";
  for (const auto& c : r.checks) {
    os << "  [" << (c.pass ? "pass" : "FAIL") << "] " << std::left << std::setw(34) << c.name
       << " worst " << std::setw(14) << c.worst_value << " tol " << c.tolerance;
    if (!c.pass && c.worst_sample) os << " at " << describe(*c.worst_sample);
    os << std::right << "\n";
  }
  os << (r.pass() ? "PASS" : "FAIL") << " (" << std::fixed << std::setprecision(2) << o.seconds << " s)\n"
     << std::defaultfloat << std::setprecision(6);
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

// Exit codes: 0 all checks pass, 1 some check failed, 2 invalid configuration,
// 3 internal error.
inline int cmd_verify(const RunConfig& cfg, const std::string& out_path, std::ostream& log,
                      bool with_timestamp = true) {
  try {
    const RunOutcome o = run_pipeline(cfg);
    if (!out_path.empty()) write_file(out_path, report_document(o, with_timestamp).dump(2) + "\n");
    print_summary(o, log);
    return o.exit_code();
  } catch (const ConfigError& e) {
    log << "invalid configuration: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

enum class SweepParameter { Eps, N };

struct SweepRow {
  double parameter = 0.0;
  int exit_code = 0;
  std::optional<double> N;
  double min_eigenvalue = 0.0;
  double max_residual = 0.0;
  std::string message;
};

inline std::vector<SweepRow> run_sweep(const RunConfig& base, SweepParameter which,
                                       const std::vector<double>& values) {
  std::vector<SweepRow> rows;
  for (double v : values) {
    SweepRow row;
    row.parameter = v;
    RunConfig c = base;
    if (which == SweepParameter::Eps) {
      c.eps = v;
    } else {
      c.n = static_cast<std::size_t>(v);
      if (static_cast<double>(c.n) != v) {
        row.exit_code = kExitBadConfig;
        row.message = "n must be an integer";
        rows.push_back(row);
        continue;
      }
      if (c.P.size() != c.n) c.P.clear();
    }
    try {
      const RunOutcome o = run_pipeline(c);
      row.exit_code = o.exit_code();
      if (!o.N_from_search || o.search.N) row.N = o.N;
      row.min_eigenvalue = o.report.min_eigenvalue;
      row.max_residual = o.report.max_lck_residual;
    } catch (const ConfigError& e) {
      row.exit_code = kExitBadConfig;
      row.message = e.what();
    } catch (const std::exception& e) {
      row.exit_code = kExitInternal;
      row.message = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json to_json(const std::vector<SweepRow>& rows, SweepParameter which) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j = {{"parameter", r.parameter},
                        {"exit_code", r.exit_code},
                        {"min_eigenvalue", number_to_json(r.min_eigenvalue)},
                        {"max_residual", number_to_json(r.max_residual)},
                        {"message", r.message}};
    j["N"] = r.N ? nlohmann::json(*r.N) : nlohmann::json(nullptr);
    arr.push_back(j);
  }
  return {{"schema_version", kReportSchemaVersion},
          {"sweep", which == SweepParameter::Eps ? "eps" : "n"},
          {"rows", arr}};
}

// Runs every value; a failing row never stops the sweep. Returns the largest
// row exit code (0 for an empty sweep).
inline int cmd_sweep(const RunConfig& base, SweepParameter which, const std::vector<double>& values,
                     const std::string& out_path, std::ostream& log) {
  try {
    const auto rows = run_sweep(base, which, values);
    log << std::left << std::setw(12) << (which == SweepParameter::Eps ? "eps" : "n") << std::setw(12) << "N"
        << std::setw(16) << "min_eig" << std::setw(16) << "max_residual" << "exit" << "\n";
    int code = kExitPass;
    for (const auto& r : rows) {
      log << std::setw(12) << r.parameter << std::setw(12) << (r.N ? std::to_string(static_cast<long long>(*r.N)) : "-")
          << std::setw(16) << r.min_eigenvalue << std::setw(16) << r.max_residual << r.exit_code;
      if (!r.message.empty()) log << "  " << r.message;
      log << "\n";
      code = std::max(code, r.exit_code);
    }
    log << std::right;
    if (!out_path.empty()) write_file(out_path, to_json(rows, which).dump(2) + "\n");
    return code;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace lckblow
