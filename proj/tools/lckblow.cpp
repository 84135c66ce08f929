// lckblow: verify the l.c.K. structure on the blow-up of a Hopf annulus.

#include <complex>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lckblow/run.hpp"
#include "lckblow/selftest.hpp"

namespace {

// "a,b,c" -> numbers; "" -> empty list.
std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    out.push_back(v);
  }
  return out;
}

// "re,im,re,im,..." -> complex coordinates
std::vector<std::complex<double>> parse_point(const std::string& text) {
  const auto v = parse_list(text);
  if (v.size() % 2 != 0) throw std::invalid_argument("P needs re,im pairs");
  std::vector<std::complex<double>> p;
  for (std::size_t i = 0; i < v.size(); i += 2) p.emplace_back(v[i], v[i + 1]);
  return p;
}

struct Flags {
  lckblow::RunConfig cfg;
  std::string P;
  std::optional<double> polyradius, eps, N;
  std::string out;
  bool no_timestamp = false;
  std::optional<std::string> sweep_eps, sweep_n;
};

void add_run_flags(CLI::App* app, Flags& f) {
  app->add_option("--n", f.cfg.n, "complex dimension (2..6)");
  app->add_option("--r", f.cfg.r, "inner radius of the annulus");
  app->add_option("--R", f.cfg.R, "outer radius of the annulus");
  app->add_option("--P", f.P, "blow-up centre as re,im,re,im,... (default (1,0,...,0))");
  app->add_option("--polyradius", f.polyradius, "polyradius of the coordinate polydisc");
  app->add_option("--eps", f.eps, "bump radius (default polyradius/8)");
  app->add_option("--samples", f.cfg.samples_per_stratum, "samples per stratum");
  app->add_option("--seed", f.cfg.seed, "random seed");
  app->add_option("--tol-analytic", f.cfg.tol_analytic, "tolerance for exact identities");
  app->add_option("--tol-glued", f.cfg.tol_glued, "tolerance for glued identities");
  app->add_option("--delta", f.cfg.delta, "positivity margin, relative to trace(N omega')");
  app->add_option("--N", f.N, "use this N instead of searching");
  app->add_option("--chi-inner", f.cfg.chi_inner, "gauge cutoff inner radius in units of eps");
  app->add_option("--chi-outer", f.cfg.chi_outer, "gauge cutoff outer radius in units of eps");
  app->add_option("--out", f.out, "report file");
}

lckblow::RunConfig finish(const Flags& f) {
  lckblow::RunConfig c = f.cfg;
  if (!f.P.empty()) c.P = parse_point(f.P);
  c.polyradius = f.polyradius;
  c.eps = f.eps;
  c.N_override = f.N;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of l.c.K. metrics on blow-ups"};
  app.require_subcommand(1);
  Flags f;

  auto* verify = app.add_subcommand("verify", "run the construction and write a report");
  add_run_flags(verify, f);
  verify->add_flag("--no-timestamp", f.no_timestamp, "omit the generated_at field");

  auto* sweep = app.add_subcommand("sweep", "run verify for a list of eps or n values");
  add_run_flags(sweep, f);
  // "--sweep-eps=" with nothing after it is an empty sweep
  auto* se = sweep->add_option("--sweep-eps", f.sweep_eps, "comma separated eps values")->expected(0, 1)->default_str("");
  auto* sn = sweep->add_option("--sweep-n", f.sweep_n, "comma separated n values")->expected(0, 1)->default_str("");
  se->excludes(sn);

  app.add_subcommand("selftest", "run the built-in consistency suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lckblow::kExitBadConfig;
  }

  try {
    if (verify->parsed()) {
      const std::string out = f.out.empty() ? "lckblow_report.json" : f.out;
      return lckblow::cmd_verify(finish(f), out, std::cout, !f.no_timestamp);
    }
    if (sweep->parsed()) {
      if (!f.sweep_eps && !f.sweep_n) {
        std::cerr << "sweep: need --sweep-eps or --sweep-n\n";
        return lckblow::kExitBadConfig;
      }
      const auto which = f.sweep_eps ? lckblow::SweepParameter::Eps : lckblow::SweepParameter::N;
      const auto values = parse_list(f.sweep_eps ? *f.sweep_eps : *f.sweep_n);
      return lckblow::cmd_sweep(finish(f), which, values, f.out, std::cout);
    }
    return lckblow::cmd_selftest(std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return lckblow::kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return lckblow::kExitInternal;
  }
}
