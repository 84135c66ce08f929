#pragma once

// Conformal gauge on the blow-up: omega' = e^f c*omega with
// f = chi * (g(P) - g o c), so that theta' = c*theta + df vanishes wherever
// chi is identically 1 (the polydisc of radius chi_inner around P).

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lckblow/blowup.hpp"
#include "lckblow/bundle.hpp"
#include "lckblow/complex.hpp"
#include "lckblow/jet.hpp"
#include "lckblow/lck_data.hpp"

namespace lckblow {

struct GaugeOptions {
  // cutoff radii in units of eps
  double chi_inner = 3.0;
  double chi_outer = 4.0;
};

struct GaugeEval {
  CMat<Jet1> omega_prime;         // e^f c*omega, with first derivatives
  std::vector<Jet1> theta_prime;  // c*theta + df, with first derivatives
  double chi = 0.0;
  bool chi_identically_one = false;
  bool chi_identically_zero = false;
};

template <LCKData D>
class Gauge {
 public:
  Gauge(D data, Region region, double eps, GaugeOptions opts = {})
      : data_(std::move(data)), region_(std::move(region)), eps_(eps), opts_(opts) {
    const std::size_t n = data_.dim();
    if (region_.dim() != n) throw std::invalid_argument("build_gauge: centre dimension mismatch");
    if (!(eps_ > 0.0) || !(opts_.chi_inner > 0.0) || !(opts_.chi_inner < opts_.chi_outer)) {
      throw std::invalid_argument("build_gauge: need eps > 0 and 0 < chi_inner < chi_outer");
    }
    if (!(chi_outer() < region_.polyradius)) {
      throw std::invalid_argument("build_gauge: cutoff support U_" + std::to_string(opts_.chi_outer) +
                                  "eps exceeds the coordinate polydisc");
    }
    // The closed polydisc of radius polyradius lies in the domain iff its
    // worst point (|x_i| = rho for all i, aligned with P) does; check the
    // Euclidean hull.
    double pn = 0.0;
    for (const auto& c : region_.center) pn += std::norm(c);
    pn = std::sqrt(pn);
    const double reach = region_.polyradius * std::sqrt(static_cast<double>(n));
    if (!data_.contains(region_.center) || !hull_inside(pn, reach)) {
      throw std::invalid_argument("build_gauge: coordinate polydisc around P leaves the domain");
    }
    if constexpr (HasLeePotential<D>) {
      const auto pc = constant_coords<double>(region_.center);
      g_center_ = data_.template potential<double>(std::span<const Complex<double>>(pc));
    } else {
      g_center_ = 0.0;  // quadrature primitive is based at P
    }
  }

  const D& data() const { return data_; }
  const Region& region() const { return region_; }
  double eps() const { return eps_; }
  double chi_inner() const { return opts_.chi_inner * eps_; }
  double chi_outer() const { return opts_.chi_outer * eps_; }
  double potential_at_center() const { return g_center_; }

  // g at ambient points, analytic when available, otherwise by quadrature
  // from P.
  template <class T>
  T potential(std::span<const Complex<T>> z) const {
    if constexpr (HasLeePotential<D>) {
      return data_.template potential<T>(z);
    } else {
      return lee_potential_quadrature<D, T>(data_, region_.center, z);
    }
  }

  template <class T>
  CutoffValue<T> chi(std::span<const Complex<T>> x) const {
    return polydisc_cutoff<T>(x, chi_inner(), chi_outer());
  }

  // f in chart coordinates.
  template <class T>
  T conformal_factor_log(const ChartId& chart, std::span<const Complex<T>> w) const {
    const CVec<T> x = blowdown<T>(chart, w);
    const CutoffValue<T> c = chi<T>(x);
    if (c.identically_zero) return T(0.0);
    const CVec<T> z = ambient(x);
    return c.value * (T(g_center_) - potential<T>(std::span<const Complex<T>>(z)));
  }

  GaugeEval evaluate(const ChartPoint& p) const {
    const std::size_t n = p.dim();
    GaugeEval out;

    const CVec<Jet2<double>> w2 = seed_coords<Jet2<double>>(p.coords);
    const std::span<const Complex<Jet2<double>>> w2s(w2);
    const CVec<Jet2<double>> x2 = blowdown<Jet2<double>>(p.chart, w2s);
    const CutoffValue<Jet2<double>> c = chi<Jet2<double>>(x2);
    out.chi = value_of(c.value);
    out.chi_identically_one = c.identically_one;
    out.chi_identically_zero = c.identically_zero;

    const CVec<Jet2<double>> z2 = ambient(x2);
    const std::span<const Complex<Jet2<double>>> z2s(z2);
    Jet2<double> f(0.0);
    Jet2<double> g_pulled(0.0);
    const bool need_g = HasLeePotential<D> || !c.identically_zero;
    if (need_g) g_pulled = potential<Jet2<double>>(z2s);
    if (!c.identically_zero) f = c.value * (Jet2<double>(g_center_) - g_pulled);

    const CVec<Jet1> w1 = seed_coords<Jet1>(p.coords);
    const std::span<const Complex<Jet1>> w1s(w1);
    const CVec<Jet1> x1 = blowdown<Jet1>(p.chart, w1s);
    const CVec<Jet1> z1 = ambient(x1);
    const std::span<const Complex<Jet1>> z1s(z1);
    const CMat<Jet1> jac = jacobian_blowdown<Jet1>(p.chart, w1s);

    // c*theta: with a global primitive this is d(g o c) by the chain rule,
    // otherwise the Jacobian pullback of theta.
    std::vector<Jet1> pulled_theta(2 * n);
    if constexpr (HasLeePotential<D>) {
      for (std::size_t k = 0; k < 2 * n; ++k) pulled_theta[k] = partial(g_pulled, k);
    } else {
      const std::vector<Jet1> th = data_.template theta<Jet1>(z1s);
      pulled_theta = pullback_oneform<Jet1>(th, jac);
    }
    out.theta_prime.resize(2 * n);
    for (std::size_t k = 0; k < 2 * n; ++k) out.theta_prime[k] = pulled_theta[k] + partial(f, k);

    const Jet1 scale = exp(truncate(f));
    const CMat<Jet1> pulled = pullback_herm(data_.template omega<Jet1>(z1s), jac);
    out.omega_prime = scaled(scale, pulled);
    return out;
  }

 private:
  bool hull_inside(double center_norm, double reach) const {
    // contains() on the two extreme radii along the centre direction
    std::vector<std::complex<double>> lo(region_.center), hi(region_.center);
    if (center_norm == 0.0) return false;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      lo[i] = region_.center[i] * ((center_norm - reach) / center_norm);
      hi[i] = region_.center[i] * ((center_norm + reach) / center_norm);
    }
    return center_norm > reach && data_.contains(lo) && data_.contains(hi);
  }

  template <class T>
  CVec<T> ambient(const CVec<T>& x) const {
    CVec<T> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = Complex<T>(region_.center[i]) + x[i];
    return z;
  }

  D data_;
  Region region_;
  double eps_;
  GaugeOptions opts_;
  double g_center_ = 0.0;
};

template <LCKData D>
Gauge<D> build_gauge(D data, Region region, double eps, GaugeOptions opts = {}) {
  return Gauge<D>(std::move(data), std::move(region), eps, opts);
}

}  // namespace lckblow
