#pragma once

// The blow-up construction end to end: the candidate form
// h_N = N omega' - Omega_E on stratified samples, the search for N, and the
// pointwise verification of positivity and of d h_N = theta' ^ h_N.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lckblow/blowup.hpp"
#include "lckblow/bundle.hpp"
#include "lckblow/forms.hpp"
#include "lckblow/gauge.hpp"
#include "lckblow/lck_data.hpp"
#include "lckblow/linalg.hpp"
#include "lckblow/report.hpp"

namespace lckblow {

enum class Stratum { OnE, NearE, Transition, GaugeAnnulus, Far };

inline const char* stratum_name(Stratum s) {
  switch (s) {
    case Stratum::OnE: return "on_E";
    case Stratum::NearE: return "near_E";
    case Stratum::Transition: return "bump_transition";
    case Stratum::GaugeAnnulus: return "gauge_annulus";
    case Stratum::Far: return "far";
  }
  return "unknown";
}

struct Sample {
  ChartPoint point;
  Stratum stratum;
};

struct SamplingPlan {
  std::size_t n = 2;
  double eps = 0.0;
  double polyradius = 0.0;
  std::size_t per_stratum = 200;
  std::uint64_t seed = 1;
  double u_radius = 4.0;        // |u| bound on and near E
  double near_e_min_t = 1e-6;   // near-E shell |t| in [near_e_min_t, eps/4]
};

namespace detail {

inline std::vector<std::complex<double>> random_ball(std::mt19937_64& rng, std::size_t m, double radius) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::complex<double>> v(m);
  double norm = 0.0;
  for (auto& c : v) {
    c = {gauss(rng), gauss(rng)};
    norm += std::norm(c);
  }
  if (m == 0) return v;
  norm = std::sqrt(norm);
  const double r = radius * std::pow(unif(rng), 1.0 / static_cast<double>(2 * m));
  for (auto& c : v) c *= r / norm;
  return v;
}

// Random base coordinates with max_i |x_i| = level.
inline std::vector<std::complex<double>> random_at_level(std::mt19937_64& rng, std::size_t n, double level) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::complex<double>> x(n);
  for (auto& c : x) c = {gauss(rng), gauss(rng)};
  const double m = max_abs(x);
  for (auto& c : x) c *= level / m;
  return x;
}

inline ChartPoint best_blow_chart(const std::vector<std::complex<double>>& x) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs(x[i]) > std::abs(x[k])) k = i;
  }
  return chart_transition({ChartId::base(), x}, ChartId::blow(k));
}

}  // namespace detail

// Stratified, seed-reproducible samples: on E, a near-E shell, the bump
// transition max|x_i| in [eps, 2eps], the gauge annulus [2eps, 4eps] and the
// far part of the polydisc. Off E, every other sample is expressed in a blow
// chart.
inline std::vector<Sample> make_samples(const SamplingPlan& plan) {
  const std::size_t n = plan.n;
  const double eps = plan.eps;
  std::mt19937_64 rng(plan.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Sample> out;
  out.reserve(5 * plan.per_stratum);

  for (std::size_t k = 0; k < plan.per_stratum; ++k) {
    std::vector<std::complex<double>> w(n);
    const auto u = detail::random_ball(rng, n - 1, plan.u_radius);
    std::copy(u.begin(), u.end(), w.begin() + 1);
    out.push_back({{ChartId::blow(k % n), w}, Stratum::OnE});
  }
  const double t_hi = 0.25 * eps;
  const double log_lo = std::log(std::min(plan.near_e_min_t, t_hi));
  const double log_hi = std::log(t_hi);
  for (std::size_t k = 0; k < plan.per_stratum; ++k) {
    std::vector<std::complex<double>> w(n);
    const double mod = std::exp(log_lo + (log_hi - log_lo) * unif(rng));
    const double arg = 2.0 * std::numbers::pi * unif(rng);
    w[0] = std::polar(mod, arg);
    const auto u = detail::random_ball(rng, n - 1, plan.u_radius);
    std::copy(u.begin(), u.end(), w.begin() + 1);
    out.push_back({{ChartId::blow(k % n), w}, Stratum::NearE});
  }
  auto shell = [&](double lo, double hi, Stratum s, bool alternate) {
    for (std::size_t k = 0; k < plan.per_stratum; ++k) {
      const double level = lo + (hi - lo) * unif(rng);
      const auto x = detail::random_at_level(rng, n, level);
      if (alternate && k % 2 == 1) {
        out.push_back({detail::best_blow_chart(x), s});
      } else {
        out.push_back({{ChartId::base(), x}, s});
      }
    }
  };
  shell(eps, 2.0 * eps, Stratum::Transition, true);
  shell(2.0 * eps, 4.0 * eps, Stratum::GaugeAnnulus, true);
  shell(4.0 * eps, 0.999 * plan.polyradius, Stratum::Far, false);
  return out;
}

struct PointEval {
  Sample sample;
  double level = 0.0;  // max_i |x_i(c(p))|
  GaugeEval gauge;
  CMat<Jet1> curvature;
  HermitianMatrix omega_prime_values;
  HermitianMatrix curvature_values;
};

inline std::string describe(const ChartPoint& p) {
  std::ostringstream os;
  os.precision(17);
  os << p.chart.name() << " (";
  for (std::size_t i = 0; i < p.coords.size(); ++i) {
    os << (i ? ", " : "") << p.coords[i].real() << (p.coords[i].imag() < 0 ? "" : "+")
       << p.coords[i].imag() << "i";
  }
  os << ")";
  return os.str();
}

template <LCKData D>
class Construction {
 public:
  Construction(D data, Region region, double eps, GaugeOptions opts = {})
      : gauge_(std::move(data), region, eps, opts), bump_(eps, region.polyradius) {}

  const Gauge<D>& gauge() const { return gauge_; }
  const BumpPair& bump() const { return bump_; }
  double eps() const { return gauge_.eps(); }
  std::size_t dim() const { return gauge_.data().dim(); }

  PointEval evaluate(const Sample& s) const {
    try {
      PointEval e;
      e.sample = s;
      e.level = Region::level(s.point);
      e.gauge = gauge_.evaluate(s.point);
      e.curvature = curvature_jet(bump_, s.point);
      e.omega_prime_values = values(e.gauge.omega_prime);
      e.curvature_values = values(e.curvature);
      return e;
    } catch (const DomainError& err) {
      throw DomainError(std::string(err.what()) + " at sample " + describe(s.point));
    }
  }

  std::vector<PointEval> evaluate_all(const std::vector<Sample>& samples) const {
    std::vector<PointEval> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(evaluate(s));
    return out;
  }

 private:
  Gauge<D> gauge_;
  BumpPair bump_;
};

// h_N = N omega' - Omega_E, pointwise. N = 0 is accepted so that the
// degenerate candidate can be examined.
struct CandidateForm {
  double N = 1.0;

  HermitianMatrix at(const PointEval& e) const { return N * e.omega_prime_values - e.curvature_values; }

  CMat<Jet1> jet_at(const PointEval& e) const {
    return scaled(Jet1(N), e.gauge.omega_prime) - e.curvature;
  }
};

inline CandidateForm candidate(double N) {
  if (!(N >= 0.0)) throw std::invalid_argument("candidate: N must be non-negative");
  return CandidateForm{N};
}

// |d h - theta ^ h| for a (1,1)-form h and one-form theta given as jets.
inline double lck_residual(const CMat<Jet1>& h, const std::vector<Jet1>& theta) {
  const PForm<Jet1> h2 = herm_to_real2form(h);
  const PForm<Jet1> th = one_form<Jet1>(theta);
  return sup_norm(exterior_d(h2) - wedge(values(th), values(h2)));
}

inline double closedness(const std::vector<Jet1>& theta) {
  return sup_norm(exterior_d(one_form<Jet1>(theta)));
}

inline double closedness(const CMat<Jet1>& h) { return sup_norm(exterior_d(herm_to_real2form(h))); }

inline double sup_norm(const std::vector<Jet1>& theta) {
  double m = 0.0;
  for (const auto& c : theta) m = std::max(m, std::abs(c.value()));
  return m;
}

// lambda_min(h_N) - delta * trace(N omega').
inline double positivity_margin(const PointEval& e, double N, double delta) {
  const double lmin = min_eigenvalue(candidate(N).at(e));
  return lmin - delta * N * e.omega_prime_values.trace().real();
}

struct FindNResult {
  std::optional<double> N;
  std::size_t witness = 0;  // sample attaining the smallest margin at the returned (or last) N
  double witness_margin = 0.0;
  double tried_up_to = 0.0;
};

// Smallest power of two N <= 2^max_exponent with positivity margin > 0 at
// every sample.
inline FindNResult find_N(const std::vector<PointEval>& evals, double delta, int max_exponent = 30) {
  FindNResult r;
  for (int k = 0; k <= max_exponent; ++k) {
    const double N = std::ldexp(1.0, k);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    bool ok = true;
    for (std::size_t i = 0; i < evals.size(); ++i) {
      const double m = positivity_margin(evals[i], N, delta);
      if (m < worst) {
        worst = m;
        arg = i;
      }
      if (!(m > 0.0)) ok = false;
    }
    r.witness = arg;
    r.witness_margin = worst;
    r.tried_up_to = N;
    if (ok) {
      r.N = N;
      return r;
    }
  }
  return r;
}

struct VerifyOptions {
  double tol_analytic = 1e-10;
  double tol_glued = 1e-8;
  double delta = 1e-8;               // positivity margin relative to trace(N omega')
  double support_tol = 1e-12;        // |theta'| |Omega_E| and vanishing thresholds
  double semidefinite_tol = 1e-10;   // max eigenvalue of Omega_E on E
  double tangent_margin = 1e-3;      // -Omega_E on T(E) must exceed this
  double kernel_angle_tol = 1e-6;    // null directions of omega' vs T(E)
  std::size_t directions_per_sample = 50;
  std::uint64_t seed = 7;
};

namespace detail {

struct Tracker {
  CheckResult result;
  bool maximize;  // track the largest value (else the smallest)
  bool seen = false;

  Tracker(std::string name, double tol, bool maximize_) : maximize(maximize_) {
    result.name = std::move(name);
    result.tolerance = tol;
    result.worst_value = maximize_ ? 0.0 : std::numeric_limits<double>::infinity();
  }
  void update(double v, const ChartPoint& p) {
    const bool worse = !seen || (maximize ? !(v <= result.worst_value) : !(v >= result.worst_value));
    if (worse) {
      result.worst_value = v;
      result.worst_sample = p;
      seen = true;
    }
  }
};

}  // namespace detail

template <LCKData D>
VerificationReport verify(const Construction<D>& cons, const std::vector<PointEval>& evals, double N,
                          const VerifyOptions& opt = {}) {
  using detail::Tracker;
  const std::size_t n = cons.dim();
  const double eps = cons.eps();
  const CandidateForm cand = candidate(N);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Tracker positivity("positivity", opt.delta, false);
  Tracker lck("lck_residual", opt.tol_glued, true);
  Tracker dtheta("lee_form_closed", opt.tol_analytic, true);
  Tracker support("support_disjoint", opt.support_tol, true);
  Tracker kernel("kernel_is_tangent_to_E", opt.kernel_angle_tol, true);
  Tracker tangent("curvature_negative_on_E_tangent", -opt.tangent_margin, true);
  Tracker normal("normal_directions_positive", 0.0, false);
  Tracker theta_near("theta_prime_vanishes_near_E", opt.support_tol, true);
  Tracker gauge_lck("gauge_lck_residual", opt.tol_glued, true);
  Tracker curv_closed("curvature_closed", opt.tol_glued, true);
  Tracker curv_support("curvature_support", opt.support_tol, true);
  Tracker curv_semidef("curvature_semidefinite_on_E", opt.semidefinite_tol, true);
  Tracker nesting("region_nesting", 0.0, true);
  Tracker base_lck("base_lck_residual", opt.tol_analytic, true);
  Tracker base_closed("base_lee_closed", opt.tol_analytic, true);

  VerificationReport rep;
  rep.n = n;
  rep.eps = eps;
  rep.N = N;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  double nesting_violations = 0.0;
  const Gauge<D>& gauge = cons.gauge();

  for (const PointEval& e : evals) {
    const ChartPoint& p = e.sample.point;
    ++rep.stratum_counts[stratum_name(e.sample.stratum)];

    const HermitianMatrix h = cand.at(e);
    const double lmin = min_eigenvalue(h);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, lmin);
    positivity.update(lmin - opt.delta * N * e.omega_prime_values.trace().real(), p);

    const double res = lck_residual(cand.jet_at(e), e.gauge.theta_prime);
    lck.update(res, p);
    dtheta.update(closedness(e.gauge.theta_prime), p);
    const double theta_norm = sup_norm(e.gauge.theta_prime);
    const double curv_norm = max_abs_entry(e.curvature_values);
    support.update(theta_norm * curv_norm, p);
    gauge_lck.update(lck_residual(e.gauge.omega_prime, e.gauge.theta_prime), p);
    curv_closed.update(closedness(e.curvature), p);

    if (e.level < gauge.chi_inner()) theta_near.update(theta_norm, p);
    if (e.level >= 2.0 * eps) curv_support.update(curv_norm, p);

    // supp(Omega_E) in U_2eps, U_2eps in {chi == 1}, supp(chi) in U_4eps
    bool violated = false;
    if (curv_norm > opt.support_tol && !(e.level < 2.0 * eps)) violated = true;
    if (e.level < 2.0 * eps && !e.gauge.chi_identically_one) violated = true;
    if (!e.gauge.chi_identically_zero && !(e.level < gauge.chi_outer())) violated = true;
    if (violated) {
      nesting_violations += 1.0;
      nesting.update(nesting_violations, p);
    }

    const auto z = gauge.region().to_ambient(blowdown(p));
    const LCKResidual base = base_residual(gauge.data(), z);
    base_lck.update(base.lee_identity, p);
    base_closed.update(base.lee_closed, p);

    if (p.on_exceptional()) {
      curv_semidef.update(max_eigenvalue(e.curvature_values), p);
      const Eigen::Index m = static_cast<Eigen::Index>(n - 1);
      const HermitianMatrix tangent_block = e.curvature_values.bottomRightCorner(m, m);
      tangent.update(max_eigenvalue(tangent_block), p);

      const Eigen::MatrixXcd ker = pairing_kernel(e.omega_prime_values, 1e-10);
      if (ker.cols() != m) {
        kernel.update(1.0, p);
      }
      auto random_vec = [&](Eigen::Index len) {
        ComplexVector c(len);
        for (Eigen::Index i = 0; i < len; ++i) c(i) = {gauss(rng), gauss(rng)};
        return c;
      };
      for (std::size_t k = 0; k < opt.directions_per_sample; ++k) {
        if (ker.cols() > 0) {
          ComplexVector v = ker * random_vec(ker.cols());
          v.normalize();
          kernel.update(std::abs(v(0)), p);
          tangent.update(e.curvature_values.size() ? pairing(e.curvature_values, v) : 0.0, p);
        }
        ComplexVector g = random_vec(static_cast<Eigen::Index>(n));
        g.normalize();
        const double pg = pairing(e.omega_prime_values, g);
        if (pg <= 1e-10 * e.omega_prime_values.trace().real()) {
          kernel.update(std::abs(g(0)), p);
        } else {
          normal.update(pg, p);
        }
      }
      ComplexVector et = ComplexVector::Zero(static_cast<Eigen::Index>(n));
      et(0) = 1.0;
      normal.update(pairing(e.omega_prime_values, et), p);
    }

    rep.max_lck_residual = std::max(rep.max_lck_residual, res);
    rep.max_dtheta = std::max(rep.max_dtheta, closedness(e.gauge.theta_prime));
    rep.max_support_overlap = std::max(rep.max_support_overlap, theta_norm * curv_norm);
  }

  auto finish = [&](Tracker& t, bool pass) {
    t.result.pass = pass;
    rep.checks.push_back(t.result);
  };
  finish(positivity, positivity.result.worst_value > 0.0);
  finish(lck, lck.result.worst_value < opt.tol_glued);
  finish(dtheta, dtheta.result.worst_value < opt.tol_analytic);
  finish(support, support.result.worst_value <= opt.support_tol);
  // without samples on E these hold vacuously
  finish(kernel, !kernel.seen || kernel.result.worst_value < opt.kernel_angle_tol);
  finish(tangent, !tangent.seen || tangent.result.worst_value < -opt.tangent_margin);
  finish(normal, !normal.seen || normal.result.worst_value > 0.0);
  finish(theta_near, theta_near.result.worst_value < opt.support_tol);
  finish(gauge_lck, gauge_lck.result.worst_value < opt.tol_glued);
  finish(curv_closed, curv_closed.result.worst_value < opt.tol_glued);
  finish(curv_support, curv_support.result.worst_value < opt.support_tol);
  finish(curv_semidef, !curv_semidef.seen || curv_semidef.result.worst_value <= opt.semidefinite_tol);
  finish(nesting, nesting_violations == 0.0);
  finish(base_lck, base_lck.result.worst_value < opt.tol_analytic);
  finish(base_closed, base_closed.result.worst_value < opt.tol_analytic);
  return rep;
}

}  // namespace lckblow
