#pragma once

// Built-in consistency suites run by `lckblow selftest`.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "lckblow/blowup.hpp"
#include "lckblow/bundle.hpp"
#include "lckblow/complex.hpp"
#include "lckblow/forms.hpp"
#include "lckblow/jet.hpp"
#include "lckblow/linalg.hpp"

namespace lckblow {

struct SuiteResult {
  std::string name;
  double worst = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;
  bool pass() const { return cases > 0 && worst <= tolerance; }
};

namespace selftest {

using RealFn = std::function<double(const std::vector<double>&)>;

// Richardson-extrapolated central differences.
inline std::vector<double> fd_gradient(const RealFn& f, const std::vector<double>& x, double h = 1e-4) {
  std::vector<double> g(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    auto central = [&](double s) {
      std::vector<double> p = x, m = x;
      p[k] += s;
      m[k] -= s;
      return (f(p) - f(m)) / (2.0 * s);
    };
    g[k] = (4.0 * central(0.5 * h) - central(h)) / 3.0;
  }
  return g;
}

inline std::vector<std::vector<double>> fd_hessian(const RealFn& f, const std::vector<double>& x,
                                                   double h = 1e-4) {
  const std::size_t m = x.size();
  std::vector<std::vector<double>> hs(m, std::vector<double>(m));
  auto second = [&](std::size_t i, std::size_t j, double s) {
    auto at = [&](double a, double b) {
      std::vector<double> p = x;
      p[i] += a;
      p[j] += b;
      return f(p);
    };
    if (i == j) {
      std::vector<double> p = x, q = x;
      p[i] += s;
      q[i] -= s;
      return (f(p) - 2.0 * f(x) + f(q)) / (s * s);
    }
    return (at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4.0 * s * s);
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      hs[i][j] = hs[j][i] = (4.0 * second(i, j, 0.5 * h) - second(i, j, h)) / 3.0;
    }
  }
  return hs;
}

template <class T>
std::vector<T> seed_reals(const std::vector<double>& x) {
  std::vector<T> v;
  for (std::size_t k = 0; k < x.size(); ++k) v.push_back(T::variable(x[k], k, x.size()));
  return v;
}

// Relative gap between the jet derivatives of f and finite differences.
template <class F>
double jet_vs_fd(const F& f, const std::vector<double>& x) {
  const auto v = seed_reals<Jet2<double>>(x);
  const Jet2<double> j = f(v);
  const RealFn fd = [&](const std::vector<double>& p) { return f(p); };
  const auto g = fd_gradient(fd, x);
  const auto h = fd_hessian(fd, x);
  double gmax = 0.0, gerr = 0.0, hmax = 0.0, herr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    gmax = std::max(gmax, std::abs(g[i]));
    gerr = std::max(gerr, std::abs(g[i] - j.grad(i)));
    for (std::size_t k = 0; k < x.size(); ++k) {
      hmax = std::max(hmax, std::abs(h[i][k]));
      herr = std::max(herr, std::abs(h[i][k] - j.hess(i, k)));
    }
  }
  return std::max(gerr / std::max(gmax, 1e-3), herr / std::max(hmax, 1e-3));
}

inline SuiteResult ad_vs_fd() {
  SuiteResult r{"ad_vs_finite_difference", 0.0, 1e-6, 0};
  auto run = [&](const auto& f, const std::vector<double>& x) {
    r.worst = std::max(r.worst, jet_vs_fd(f, x));
    ++r.cases;
  };
  const std::vector<double> x0 = {0.3, -0.7, 1.1, 0.4};
  run([](const auto& v) { return v[0] * v[1] + v[2] * v[3] * v[3]; }, x0);
  run([](const auto& v) {
    using std::exp;
    return exp(v[0] * v[2]) / (v[1] * v[1] + 2.0);
  }, x0);
  run([](const auto& v) {
    using std::log;
    return log(1.0 + v[0] * v[0] + v[1] * v[1]) * v[3];
  }, x0);
  run([](const auto& v) {
    using std::sqrt;
    return sqrt(3.0 + v[2] * v[1]) - v[0] / (1.0 + v[3] * v[3]);
  }, x0);

  // glued weights in the transition annulus
  const BumpPair bump(1.0 / 16.0, 0.5);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> level(1.05 / 16.0, 1.95 / 16.0), angle(0.0, 6.283185307179586);
  for (int s = 0; s < 6; ++s) {
    const double lv = level(rng);
    std::vector<double> x = {lv * std::cos(angle(rng)), lv * std::sin(angle(rng)), 0.0, 0.0};
    const double second = 0.6 * lv;
    x[2] = second * std::cos(angle(rng));
    x[3] = second * std::sin(angle(rng));
    const ChartId chart = (s % 2 == 0) ? ChartId::base() : ChartId::blow(0);
    if (chart.is_blow()) {
      // (t, u) with t = x_1, u = x_2 / x_1
      const std::complex<double> t(x[0], x[1]), u = std::complex<double>(x[2], x[3]) / t;
      x = {t.real(), t.imag(), u.real(), u.imag()};
    }
    run([&](const auto& v) {
      using T = std::decay_t<decltype(v[0])>;
      const CVec<T> w = {Complex<T>(v[0], v[1]), Complex<T>(v[2], v[3])};
      return glued_weight<T>(bump, chart, std::span<const Complex<T>>(w));
    }, x);
  }
  return r;
}

inline SuiteResult d_squared() {
  SuiteResult r{"d_squared_vanishes", 0.0, 1e-10, 0};
  const std::vector<double> x0 = {0.2, 0.5, -0.4, 0.9};
  // d(dg) for a function g
  auto g = [](const auto& v) {
    using std::exp;
    using std::log;
    return exp(0.3 * v[0] * v[1]) * log(2.0 + v[2] * v[2]) + v[3] * v[0] * v[2];
  };
  const Jet2<double> j = g(seed_reals<Jet2<double>>(x0));
  std::vector<Jet1> dg;
  for (std::size_t k = 0; k < 4; ++k) dg.push_back(partial(j, k));
  const RealPForm ddg = exterior_d(one_form<Jet1>(dg));
  r.worst = std::max(r.worst, sup_norm(ddg));
  ++r.cases;

  // d of i ddbar phi for glued weights
  const BumpPair bump(1.0 / 16.0, 0.5);
  const std::vector<ChartPoint> pts = {
      {ChartId::base(), {{0.07, 0.02}, {-0.03, 0.05}}},
      {ChartId::blow(0), {{0.05, 0.06}, {0.4, -0.3}}},
      {ChartId::blow(1), {{0.0, 0.0}, {1.3, 0.2}}},
  };
  for (const auto& p : pts) {
    const CMat<Jet1> omega = curvature_jet(bump, p);
    const double scale = std::max(1.0, max_abs_entry(values(omega)));
    r.worst = std::max(r.worst, sup_norm(exterior_d(herm_to_real2form(omega))) / scale);
    ++r.cases;
  }
  return r;
}

inline SuiteResult atlas_round_trip() {
  SuiteResult r{"atlas_round_trip", 0.0, 1e-12, 0};
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t n = 2; n <= 4; ++n) {
    for (int s = 0; s < 20; ++s) {
      std::vector<std::complex<double>> x(n);
      for (auto& c : x) c = {0.1 * gauss(rng), 0.1 * gauss(rng)};
      const ChartPoint base{ChartId::base(), x};
      for (std::size_t j = 0; j < n; ++j) {
        const ChartPoint pj = chart_transition(base, ChartId::blow(j));
        for (std::size_t k = 0; k < n; ++k) {
          const ChartPoint pk = chart_transition(pj, ChartId::blow(k));
          const ChartPoint back = chart_transition(pk, ChartId::blow(j));
          for (std::size_t i = 0; i < n; ++i) {
            r.worst = std::max(r.worst, std::abs(back.coords[i] - pj.coords[i]) / (1.0 + std::abs(pj.coords[i])));
          }
          const auto xk = blowdown(pk);
          for (std::size_t i = 0; i < n; ++i) {
            r.worst = std::max(r.worst, std::abs(xk[i] - x[i]) / (1.0 + std::abs(x[i])));
          }
          ++r.cases;
        }
      }
    }
  }
  return r;
}

inline SuiteResult fs_positivity() {
  SuiteResult r{"fubini_study_positive", 0.0, 1e-12, 0};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t m = 1; m <= 5; ++m) {
    for (int s = 0; s < 20; ++s) {
      std::vector<std::complex<double>> u(m);
      double u2 = 0.0;
      for (auto& c : u) {
        c = {2.0 * gauss(rng), 2.0 * gauss(rng)};
        u2 += std::norm(c);
      }
      const HermitianMatrix fs = fubini_study(u);
      const Eigen::VectorXd ev = eigenvalues(fs);  // ascending
      // spectrum: 1/(1+|u|^2)^2 once, 1/(1+|u|^2) with multiplicity m-1
      const double s1 = 1.0 + u2;
      r.worst = std::max(r.worst, std::abs(ev(0) - 1.0 / (s1 * s1)) * s1 * s1);
      for (Eigen::Index k = 1; k < ev.size(); ++k) r.worst = std::max(r.worst, std::abs(ev(k) - 1.0 / s1) * s1);
      if (!(ev(0) > 0.0)) r.worst = std::max(r.worst, 1.0);
      ++r.cases;
    }
  }
  return r;
}

}  // namespace selftest

inline std::vector<SuiteResult> run_selftests() {
  return {selftest::ad_vs_fd(), selftest::d_squared(), selftest::atlas_round_trip(), selftest::fs_positivity()};
}

// 0 iff every suite passes, 3 on an internal error.
inline int cmd_selftest(std::ostream& log) {
  try {
    bool ok = true;
    for (const auto& s : run_selftests()) {
      log << "[" << (s.pass() ? "pass" : "FAIL") << "] " << std::left << std::setw(26) << s.name << std::right
          << " cases " << std::setw(4) << s.cases << "  worst " << s.worst << "  tol " << s.tolerance << "\n";
      ok = ok && s.pass();
    }
    log << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace lckblow
