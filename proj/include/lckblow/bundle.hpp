#pragma once

// Hermitian metric h = rho1 h' + rho2 h'' on O(E) over the blown-up polydisc,
// and its curvature.
//
// h'(s_E, s_E) = |x|^2 is the pulled-back tautological metric, h'' makes the
// tautological section s_E unitary. The local weight of chart C is
// phi_C = -log h(sigma_C, sigma_C) with sigma_Base = s_E and
// sigma_Blow(j) = s_E / t, and the curvature coefficient matrix is
// Omega_E = ddbar(phi_C), i.e. Omega_E = -i ddbar log h(sigma, sigma).

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lckblow/blowup.hpp"
#include "lckblow/complex.hpp"
#include "lckblow/jet.hpp"
#include "lckblow/linalg.hpp"

namespace lckblow {

// Below this distance from the ends of [0, 1] the smooth step equals its end
// value to far below double precision, including all derivatives.
inline constexpr double kStepFlat = 1.0 / 700.0;

// C-infinity step: 0 for tau <= 0, 1 for tau >= 1, built from exp(-1/tau).
template <class T>
T smooth_step(const T& tau) {
  using std::exp;
  const double v = value_of(tau);
  if (v <= kStepFlat) return T(0.0);
  if (v >= 1.0 - kStepFlat) return T(1.0);
  const T a = exp(T(-1.0) / tau);
  const T b = exp(T(-1.0) / (T(1.0) - tau));
  return a / (a + b);
}

template <class T>
struct CutoffValue {
  T value;
  bool identically_one = false;
  bool identically_zero = false;
};

// prod_i step((outer - |x_i|) / (outer - inner)): identically 1 on the
// polydisc of radius inner, identically 0 outside radius outer.
template <class T>
CutoffValue<T> polydisc_cutoff(std::span<const Complex<T>> x, double inner, double outer) {
  using std::sqrt;
  CutoffValue<T> out{T(1.0), true, false};
  const double width = outer - inner;
  for (const auto& xi : x) {
    const double r = std::abs(value_of(xi));
    const double tau = (outer - r) / width;
    if (tau >= 1.0 - kStepFlat) continue;
    if (tau <= kStepFlat) return {T(0.0), false, true};
    const T radius = sqrt(norm2(xi));
    out.value = out.value * smooth_step(T((T(outer) - radius) / T(width)));
    out.identically_one = false;
  }
  return out;
}

class BumpPair {
 public:
  BumpPair(double eps, double polyradius) : eps_(eps) {
    if (!(eps > 0.0) || !(2.0 * eps < polyradius)) {
      throw std::invalid_argument("make_bump: need 0 < 2*eps < polyradius (eps=" +
                                  std::to_string(eps) + ", polyradius=" +
                                  std::to_string(polyradius) + ")");
    }
  }

  double eps() const { return eps_; }

  // rho1 at base coordinates x.
  template <class T>
  CutoffValue<T> rho1(std::span<const Complex<T>> x) const {
    return polydisc_cutoff<T>(x, eps_, 2.0 * eps_);
  }

  template <class T>
  T rho2(std::span<const Complex<T>> x) const {
    return T(1.0) - rho1<T>(x).value;
  }

 private:
  double eps_;
};

inline BumpPair make_bump(double eps, double polyradius) { return BumpPair(eps, polyradius); }

// phi_C at chart coordinates w (jets in the chart's real coordinates).
template <class T>
T glued_weight(const BumpPair& bump, const ChartId& chart, std::span<const Complex<T>> w) {
  using std::log;
  const CVec<T> x = blowdown<T>(chart, w);
  const CutoffValue<T> rho1 = bump.rho1<T>(x);
  if (!chart.is_blow()) {
    T x2(0.0);
    for (const auto& c : x) x2 = x2 + norm2(c);
    if (rho1.identically_zero) return T(0.0);
    if (value_of(x2) == 0.0) {
      throw DomainError("glued_weight: the blow-up centre has no Base chart weight");
    }
    return -log(rho1.value * x2 + (T(1.0) - rho1.value));
  }
  // |x|^2 / |t|^2 = 1 + sum |u_i|^2
  T s(1.0);
  for (std::size_t k = 1; k < w.size(); ++k) s = s + norm2(w[k]);
  if (rho1.identically_one) return -log(s);
  const T t2 = norm2(w[0]);
  if (value_of(t2) == 0.0) {
    throw DomainError("glued_weight: rho2 does not vanish at a point of E");
  }
  const T rho2 = T(1.0) - rho1.value;
  if (rho1.identically_zero) return log(t2);
  return -log(rho1.value * s + rho2 / t2);
}

// Curvature coefficients with first derivatives, from a third-order weight jet.
inline CMat<Jet1> curvature_jet(const BumpPair& bump, const ChartPoint& p) {
  const auto w = seed_coords<Jet3>(p.coords);
  const Jet3 phi = glued_weight<Jet3>(bump, p.chart, w);
  return ddbar(phi, p.dim());
}

inline HermitianMatrix curvature(const BumpPair& bump, const ChartPoint& p) {
  const auto w = seed_coords<Jet2<double>>(p.coords);
  const Jet2<double> phi = glued_weight<Jet2<double>>(bump, p.chart, w);
  return values(ddbar(phi, p.dim()));
}

// sigma_C = g * sigma_D on overlaps; phi_C - phi_D = -log |g|^2.
inline std::complex<double> section_transition(const ChartPoint& p, const ChartId& other) {
  const ChartPoint q = chart_transition(p, other);
  auto t_of = [](const ChartPoint& pt) -> std::complex<double> {
    return pt.chart.is_blow() ? pt.coords[0] : std::complex<double>(1.0);
  };
  return t_of(q) / t_of(p);
}

}  // namespace lckblow
