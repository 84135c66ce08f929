// Acceptance suite: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "lckblow/construction.hpp"
#include "lckblow/run.hpp"
#include "support/oracles.hpp"

using namespace lckblow;
using cd = std::complex<double>;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Run {
  RunConfig cfg;
  std::unique_ptr<Construction<HopfAnnulus>> cons;
  std::vector<PointEval> evals;
  double eval_seconds = 0.0;
};

Run build(std::size_t n) {
  Run r;
  r.cfg.n = n;
  r.cfg = r.cfg.resolved();
  const auto t0 = Clock::now();
  r.cons = std::make_unique<Construction<HopfAnnulus>>(HopfAnnulus(n, r.cfg.r, r.cfg.R),
                                                       Region{r.cfg.P, *r.cfg.polyradius}, *r.cfg.eps);
  SamplingPlan plan;
  plan.n = n;
  plan.eps = *r.cfg.eps;
  plan.polyradius = *r.cfg.polyradius;
  plan.per_stratum = r.cfg.samples_per_stratum;
  plan.seed = r.cfg.seed;
  r.evals = r.cons->evaluate_all(make_samples(plan));
  r.eval_seconds = seconds_since(t0);
  return r;
}

// 1. base l.c.K. identity on Hopf data
Outcome criterion1() {
  Outcome o;
  for (std::size_t n : {2u, 3u}) {
    const auto t0 = Clock::now();
    RunConfig cfg;
    cfg.n = n;
    cfg = cfg.resolved();
    SamplingPlan plan;
    plan.n = n;
    plan.eps = *cfg.eps;
    plan.polyradius = *cfg.polyradius;
    const auto samples = make_samples(plan);
    const HopfAnnulus data(n, cfg.r, cfg.R);
    const Region reg{cfg.P, *cfg.polyradius};
    double lee = 0.0, closed = 0.0;
    for (const auto& s : samples) {
      const LCKResidual r = base_residual(data, reg.to_ambient(blowdown(s.point)));
      lee = std::max(lee, r.lee_identity);
      closed = std::max(closed, r.lee_closed);
    }
    const double secs = seconds_since(t0);
    const std::string tag = "n=" + std::to_string(n) + " ";
    o.require(samples.size() >= 1000, tag + "samples " + std::to_string(samples.size()) + " >= 1000");
    o.require(lee < 1e-10, tag + "max |d omega - theta ^ omega| " + fmt(lee) + " < 1e-10");
    o.require(closed < 1e-12, tag + "max |d theta| " + fmt(closed) + " < 1e-12");
    o.require(secs < 10.0, tag + "runtime " + fmt(secs) + " s < 10 s");
  }
  return o;
}

// -pi'* omega_FS written in the sample's own chart
HermitianMatrix pulled_back_fs(const ChartPoint& p) {
  const std::size_t n = p.dim();
  HermitianMatrix m = HermitianMatrix::Zero(n, n);
  if (p.chart.is_blow()) {
    double s = 1.0;
    for (std::size_t i = 1; i < n; ++i) s += std::norm(p.coords[i]);
    for (std::size_t a = 1; a < n; ++a)
      for (std::size_t b = 1; b < n; ++b)
        m(a, b) = -((a == b ? s : 0.0) - std::conj(p.coords[a]) * p.coords[b]) / (s * s);
  } else {
    double s = 0.0;
    for (const auto& c : p.coords) s += std::norm(c);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        m(a, b) = -((a == b ? s : 0.0) - std::conj(p.coords[a]) * p.coords[b]) / (s * s);
  }
  return m;
}

// 2. curvature structure
Outcome criterion2(const std::vector<Run>& runs) {
  Outcome o;
  for (const auto& run : runs) {
    const double eps = *run.cfg.eps;
    const Eigen::Index m = static_cast<Eigen::Index>(run.cfg.n - 1);
    double outside = 0.0, fs_gap = 0.0, tangent = -1e300, full = -1e300, closed = 0.0;
    std::size_t e_samples = 0, inner = 0;
    for (const auto& e : run.evals) {
      const ChartPoint& p = e.sample.point;
      if (e.level >= 2 * eps) outside = std::max(outside, max_abs_entry(e.curvature_values));
      if (e.level < eps) {
        fs_gap = std::max(fs_gap, (e.curvature_values - pulled_back_fs(p)).cwiseAbs().maxCoeff());
        ++inner;
      }
      if (p.on_exceptional()) {
        ++e_samples;
        tangent = std::max(tangent, max_eigenvalue(e.curvature_values.bottomRightCorner(m, m)));
        full = std::max(full, max_eigenvalue(e.curvature_values));
      }
      closed = std::max(closed, closedness(e.curvature));
    }
    const std::string tag = "n=" + std::to_string(run.cfg.n) + " ";
    o.require(outside < 1e-12, tag + "max |Omega_E| outside U_2eps " + fmt(outside) + " < 1e-12");
    o.require(inner > 0 && fs_gap < 1e-9,
              tag + "max |Omega_E + pi'* omega_FS| in U_eps " + fmt(fs_gap) + " < 1e-9 (" + std::to_string(inner) + " samples)");
    o.require(e_samples >= 200, tag + "E samples " + std::to_string(e_samples) + " >= 200");
    o.require(tangent < -1e-3, tag + "max eigenvalue on T(E) " + fmt(tangent) + " < -1e-3");
    o.require(full <= 1e-10, tag + "max eigenvalue at E " + fmt(full) + " <= 1e-10");
    o.require(closed < 1e-8, tag + "max |d Omega_E| " + fmt(closed) + " < 1e-8");
  }
  return o;
}

// 3. kernel of the blow-down differential
Outcome criterion3(const std::vector<Run>& runs) {
  Outcome o;
  for (const auto& run : runs) {
    std::size_t bad_rank = 0, count = 0;
    double worst_image = 0.0;
    for (const auto& e : run.evals) {
      const ChartPoint& p = e.sample.point;
      if (!p.on_exceptional()) continue;
      ++count;
      const HermitianMatrix jac = jacobian_blowdown(p);
      const Eigen::JacobiSVD<HermitianMatrix> svd(jac);
      int above = 0;
      for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) above += svd.singularValues()(k) > 1e-10;
      bad_rank += above != 1;
      for (const auto& v : exceptional_tangent(p)) worst_image = std::max(worst_image, (jac * v).norm());
    }
    const std::string tag = "n=" + std::to_string(run.cfg.n) + " ";
    o.require(count > 0 && bad_rank == 0,
              tag + "one singular value above 1e-10 at " + std::to_string(count - bad_rank) + "/" + std::to_string(count) + " E samples");
    o.require(worst_image < 1e-12, tag + "max |c_* v| for v in T(E) " + fmt(worst_image) + " < 1e-12");
  }
  return o;
}

// 4. gauge
Outcome criterion4(const std::vector<Run>& runs) {
  Outcome o;
  for (const auto& run : runs) {
    const double eps = *run.cfg.eps;
    double theta_near = 0.0, residual = 0.0, dtheta = 0.0;
    std::size_t near = 0;
    for (const auto& e : run.evals) {
      if (e.level < 3 * eps) {
        theta_near = std::max(theta_near, sup_norm(e.gauge.theta_prime));
        ++near;
      }
      residual = std::max(residual, lck_residual(e.gauge.omega_prime, e.gauge.theta_prime));
      dtheta = std::max(dtheta, closedness(e.gauge.theta_prime));
    }
    const std::string tag = "n=" + std::to_string(run.cfg.n) + " ";
    o.require(near > 0 && theta_near < 1e-12, tag + "max |theta'| on c^-1(U_3eps) " + fmt(theta_near) + " < 1e-12");
    o.require(residual < 1e-8, tag + "max |d omega' - theta' ^ omega'| " + fmt(residual) + " < 1e-8");
    o.require(dtheta < 1e-10, tag + "max |d theta'| " + fmt(dtheta) + " < 1e-10");
  }
  return o;
}

// 5. positivity and l.c.K. identity of the candidate
Outcome criterion5(const std::vector<Run>& runs) {
  Outcome o;
  for (const auto& run : runs) {
    const auto t0 = Clock::now();
    const double delta = run.cfg.delta;
    const FindNResult r = find_N(run.evals, delta);
    const std::string tag = "n=" + std::to_string(run.cfg.n) + " ";
    o.require(r.N.has_value(), tag + "find_N terminates" + (r.N ? " with N = " + fmt(*r.N) : std::string()));
    if (!r.N) continue;
    VerifyOptions opt;
    opt.delta = delta;
    const VerificationReport rep = verify(*run.cons, run.evals, *r.N, opt);
    double margin = 1e300;
    for (const auto& e : run.evals) margin = std::min(margin, positivity_margin(e, *r.N, delta));
    const double secs = run.eval_seconds + seconds_since(t0);
    o.require(run.evals.size() >= 1000, tag + "samples " + std::to_string(run.evals.size()) + " >= 1000");
    o.require(margin > 0, tag + "min over samples of lambda_min - delta N tr(omega') = " + fmt(margin) + " > 0");
    o.require(rep.max_lck_residual < 1e-8,
              tag + "max |d h_N - theta' ^ h_N| " + fmt(rep.max_lck_residual) + " < 1e-8");
    std::string failed;
    for (const auto& c : rep.checks)
      if (!c.pass) failed += " " + c.name;
    o.require(rep.pass(), tag + "verify passes all " + std::to_string(rep.checks.size()) + " checks" + failed);
    o.require(secs < 120.0, tag + "runtime " + fmt(secs) + " s < 120 s");
  }
  return o;
}

// 6. jets against Richardson differences on a 50-expression corpus
Outcome criterion6() {
  Outcome o;
  using J2 = Jet2<double>;
  // the differences run in long double when the function allows it, double otherwise
  auto gap = [](const std::function<J2(const std::vector<J2>&)>& fj, const auto& fd, const std::vector<double>& x) {
    using R = typename std::decay_t<decltype(fd)>::result_type;
    std::vector<J2> v;
    for (std::size_t k = 0; k < x.size(); ++k) v.push_back(J2::variable(x[k], k, x.size()));
    const J2 j = fj(v);
    const auto g = oracle::gradient_in<R>(fd, x);
    const auto h = oracle::hessian_in<R>(fd, x);
    std::vector<double> jg, jh, fg, fh;
    for (std::size_t i = 0; i < x.size(); ++i) {
      jg.push_back(j.grad(i));
      fg.push_back(g[i]);
      for (std::size_t k = 0; k < x.size(); ++k) {
        jh.push_back(j.hess(i, k));
        fh.push_back(h[i][k]);
      }
    }
    return std::max(oracle::rel_gap(jg, fg), oracle::rel_gap(jh, fh));
  };
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> pt(-1.0, 1.0);
  double worst_expr = 0.0;
  for (int s = 0; s < 40; ++s) {
    const auto e = oracle::random_expr(rng, 6, 4);
    std::vector<double> x(4);
    for (auto& xi : x) xi = pt(rng);
    worst_expr = std::max(worst_expr, gap([&](const auto& v) { return e->eval(v); },
                                          oracle::FnL([&](const auto& v) { return e->eval(v); }), x));
  }
  // glued weights at transition-zone points, in Base and Blow charts
  const RunConfig cfg = RunConfig{}.resolved();
  const double eps = *cfg.eps;
  const BumpPair bump(eps, *cfg.polyradius);
  std::uniform_real_distribution<double> lv(1.02 * eps, 1.98 * eps), ang(0.0, 2 * M_PI), fr(0.1, 0.9);
  double worst_weight = 0.0;
  for (int s = 0; s < 10; ++s) {
    const double level = lv(rng);
    const std::vector<cd> x = {std::polar(level, ang(rng)), std::polar(level * fr(rng), ang(rng))};
    const ChartPoint p = s % 2 ? chart_transition({ChartId::base(), x}, ChartId::blow(0)) : ChartPoint{ChartId::base(), x};
    const std::vector<double> xr = {p.coords[0].real(), p.coords[0].imag(), p.coords[1].real(), p.coords[1].imag()};
    auto phi = [&](const auto& v) {
      using T = std::decay_t<decltype(v[0])>;
      const CVec<T> w = {Complex<T>(v[0], v[1]), Complex<T>(v[2], v[3])};
      return glued_weight<T>(bump, p.chart, std::span<const Complex<T>>(w));
    };
    worst_weight = std::max(worst_weight, gap(phi, oracle::Fn(phi), xr));
  }
  o.require(worst_expr < 1e-6, "40 random expressions of depth <= 6: worst relative gap " + fmt(worst_expr) + " < 1e-6");
  o.require(worst_weight < 1e-6, "10 glued weights in the transition zone: worst relative gap " + fmt(worst_weight) + " < 1e-6");
  return o;
}

// 7. fault injection through the command layer
Outcome criterion7() {
  Outcome o;
  namespace fs = std::filesystem;
  auto run = [&](RunConfig cfg, const std::string& file, const std::string& check_name, const std::string& label) {
    const fs::path out = fs::temp_directory_path() / file;
    std::ostringstream log;
    const int code = cmd_verify(cfg, out.string(), log, false);
    std::ifstream f(out);
    const auto doc = nlohmann::json::parse(f);
    bool failed = false, has_sample = false;
    std::string where;
    for (const auto& c : doc["report"]["checks"]) {
      if (c["name"] == check_name && c["status"] == "fail") {
        failed = true;
        has_sample = !c["worst_sample"].is_null();
        if (has_sample) where = describe(chart_point_from_json(c["worst_sample"]));
      }
    }
    o.require(code == kExitChecksFailed, label + ": exit code " + std::to_string(code) + " == 1");
    o.require(failed, label + ": " + check_name + " fails");
    o.require(has_sample, label + ": offending sample recorded " + where);
  };
  RunConfig zero;
  zero.N_override = 0.0;
  run(zero, "lckblow_acceptance_n0.json", "positivity", "N = 0");
  RunConfig shrunk;
  shrunk.chi_inner = 1.0;
  shrunk.chi_outer = 1.5;
  run(shrunk, "lckblow_acceptance_chi.json", "support_disjoint", "chi support 1.5 eps < 2 eps");
  return o;
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int k, const std::string& title, const Outcome& o) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << k << ": " << title << "\n";
    for (const auto& n : o.notes) std::cout << "        " << n << "\n";
    all = all && o.pass;
  };
  try {
    report(1, "base l.c.K. identity", criterion1());
    std::vector<Run> runs;
    runs.push_back(build(2));
    runs.push_back(build(3));
    report(2, "curvature structure", criterion2(runs));
    report(3, "kernel structure", criterion3(runs));
    report(4, "gauge", criterion4(runs));
    report(5, "positivity of N omega' - Omega_E", criterion5(runs));
    report(6, "differentiation integrity", criterion6());
    report(7, "fault injection", criterion7());
  } catch (const std::exception& e) {
    std::cout << "FAIL  internal error: " << e.what() << "\n";
    return 1;
  }
  std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << "\n";
  return all ? 0 : 1;
}
