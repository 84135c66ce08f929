#pragma once

// Locally conformally Kaehler data on a domain of C^n: a Hermitian coefficient
// field omega and a real Lee form theta with d omega = theta ^ omega.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "lckblow/complex.hpp"
#include "lckblow/forms.hpp"
#include "lckblow/jet.hpp"

namespace lckblow {

template <class D>
concept LCKData = requires(const D& d, std::span<const Complex<double>> z,
                           std::span<const std::complex<double>> p) {
  { d.dim() } -> std::convertible_to<std::size_t>;
  { d.contains(p) } -> std::convertible_to<bool>;
  { d.segment_exit(p, p) } -> std::same_as<std::optional<double>>;
  { d.template omega<double>(z) } -> std::same_as<CMat<double>>;
  { d.template theta<double>(z) } -> std::same_as<std::vector<double>>;
};

// Data that also knows a global primitive g of theta (dg = theta).
template <class D>
concept HasLeePotential = LCKData<D> && requires(const D& d, std::span<const Complex<double>> z) {
  { d.template potential<double>(z) } -> std::same_as<double>;
};

// omega = i sum dz_a ^ dzbar_a / |z|^2 on r < |z| < R, the local model of the
// Hopf manifold; theta = -d log |z|^2 with potential g = -log |z|^2.
class HopfAnnulus {
 public:
  HopfAnnulus(std::size_t n, double r, double big_r) : n_(n), r_(r), big_r_(big_r) {
    if (n < 1 || 2 * n > kMaxVars) throw std::invalid_argument("hopf_annulus: unsupported dimension");
    if (!(r > 0.0) || !(r < big_r)) throw std::invalid_argument("hopf_annulus: need 0 < r < R");
  }

  std::size_t dim() const { return n_; }
  double inner_radius() const { return r_; }
  double outer_radius() const { return big_r_; }

  bool contains(std::span<const std::complex<double>> z) const {
    const double s = norm_sq(z);
    return s > r_ * r_ && s < big_r_ * big_r_;
  }

  // First parameter s in [0, 1] at which the segment a + s (b - a) leaves
  // the annulus, if any.
  std::optional<double> segment_exit(std::span<const std::complex<double>> a,
                                     std::span<const std::complex<double>> b) const {
    double aa = 0.0, ad = 0.0, dd = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto d = b[i] - a[i];
      aa += std::norm(a[i]);
      ad += (a[i] * std::conj(d)).real();
      dd += std::norm(d);
    }
    // |gamma(s)|^2 = aa + 2 ad s + dd s^2
    auto first_root = [&](double level) -> std::optional<double> {
      if (dd == 0.0) return std::nullopt;
      const double disc = ad * ad - dd * (aa - level);
      if (disc < 0.0) return std::nullopt;
      const double sq = std::sqrt(disc);
      for (double s : {(-ad - sq) / dd, (-ad + sq) / dd}) {
        if (s >= 0.0 && s <= 1.0) return s;
      }
      return std::nullopt;
    };
    if (!contains(a)) return 0.0;
    std::optional<double> exit;
    for (double level : {r_ * r_, big_r_ * big_r_}) {
      if (auto s = first_root(level); s && (!exit || *s < *exit)) exit = s;
    }
    return exit;
  }

  template <class T>
  CMat<T> omega(std::span<const Complex<T>> z) const {
    const T inv = T(1.0) / radius_sq(z);
    CMat<T> h(n_, n_);
    for (std::size_t a = 0; a < n_; ++a) h(a, a) = Complex<T>(inv, T(0.0));
    return h;
  }

  template <class T>
  std::vector<T> theta(std::span<const Complex<T>> z) const {
    const T inv = T(-2.0) / radius_sq(z);
    std::vector<T> th(2 * n_);
    for (std::size_t a = 0; a < n_; ++a) {
      th[2 * a] = inv * z[a].re;
      th[2 * a + 1] = inv * z[a].im;
    }
    return th;
  }

  template <class T>
  T potential(std::span<const Complex<T>> z) const {
    using std::log;
    return -log(radius_sq(z));
  }

 private:
  template <class T>
  static T radius_sq(std::span<const Complex<T>> z) {
    T s(0.0);
    for (const auto& c : z) s = s + norm2(c);
    if (value_of(s) == 0.0) throw DomainError("hopf_annulus: evaluated at the origin");
    return s;
  }
  static double norm_sq(std::span<const std::complex<double>> z) {
    double s = 0.0;
    for (const auto& c : z) s += std::norm(c);
    return s;
  }

  std::size_t n_;
  double r_;
  double big_r_;
};

// Exposes omega and theta of D but hides its Lee potential, forcing the
// quadrature route wherever a primitive is needed.
template <LCKData D>
class LeeFormOnly {
 public:
  explicit LeeFormOnly(D inner) : inner_(std::move(inner)) {}
  std::size_t dim() const { return inner_.dim(); }
  bool contains(std::span<const std::complex<double>> z) const { return inner_.contains(z); }
  std::optional<double> segment_exit(std::span<const std::complex<double>> a,
                                     std::span<const std::complex<double>> b) const {
    return inner_.segment_exit(a, b);
  }
  template <class T>
  CMat<T> omega(std::span<const Complex<T>> z) const {
    return inner_.template omega<T>(z);
  }
  template <class T>
  std::vector<T> theta(std::span<const Complex<T>> z) const {
    return inner_.template theta<T>(z);
  }
  const D& inner() const { return inner_; }

 private:
  D inner_;
};

inline HopfAnnulus hopf_annulus(std::size_t n, double r, double big_r) {
  return HopfAnnulus(n, r, big_r);
}

namespace detail {

// Gauss-Kronrod 15-point abscissae and weights on [-1, 1] (7-point Gauss
// embedded at odd positions).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T, class F>
std::pair<T, double> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = T(kWgk[7]) * fc;
  double gauss = kWg[3] * value_of(fc);
  for (std::size_t k = 0; k < 7; ++k) {
    const T sum = f(c - h * kXgk[k]) + f(c + h * kXgk[k]);
    kron = kron + T(kWgk[k]) * sum;
    if (k % 2 == 1) gauss += kWg[k / 2] * value_of(sum);
  }
  return {T(h) * kron, std::abs(h * (value_of(kron) - gauss))};
}

template <class T, class F>
T adaptive_gk(const F& f, double a, double b, double tol, int depth) {
  auto [est, err] = gk15<T>(f, a, b);
  if (err <= tol || depth >= 40) return est;
  const double m = 0.5 * (a + b);
  return adaptive_gk<T>(f, a, m, 0.5 * tol, depth + 1) + adaptive_gk<T>(f, m, b, 0.5 * tol, depth + 1);
}

}  // namespace detail

// Integral of theta along the straight segment from base to target, i.e.
// a local primitive of the closed Lee form. Target may carry jets, in which
// case the derivatives of the primitive with respect to the endpoint come out
// of the same quadrature.
template <LCKData D, class T>
T lee_potential_quadrature(const D& data, std::span<const std::complex<double>> base,
                           std::span<const Complex<T>> target, double abs_tol = 1e-12) {
  const std::size_t n = data.dim();
  if (base.size() != n || target.size() != n) {
    throw std::invalid_argument("lee_potential_quadrature: dimension mismatch");
  }
  std::vector<std::complex<double>> target_values(n);
  for (std::size_t i = 0; i < n; ++i) target_values[i] = value_of(target[i]);
  if (auto s = data.segment_exit(base, target_values)) {
    std::ostringstream msg;
    msg << "lee_potential_quadrature: segment leaves the domain at parameter s = " << *s;
    throw DomainError(msg.str());
  }
  CVec<T> delta(n);
  for (std::size_t i = 0; i < n; ++i) delta[i] = target[i] - Complex<T>(base[i]);
  auto integrand = [&](double s) -> T {
    CVec<T> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = Complex<T>(base[i]) + Complex<T>(T(s), T(0.0)) * delta[i];
    const std::vector<T> th = data.template theta<T>(std::span<const Complex<T>>(z));
    T acc(0.0);
    for (std::size_t i = 0; i < n; ++i) {
      acc = acc + th[2 * i] * delta[i].re + th[2 * i + 1] * delta[i].im;
    }
    return acc;
  };
  return detail::adaptive_gk<T>(integrand, 0.0, 1.0, abs_tol, 0);
}

template <LCKData D>
double lee_potential_quadrature(const D& data, std::span<const std::complex<double>> base,
                                std::span<const std::complex<double>> target,
                                double abs_tol = 1e-12) {
  const auto t = constant_coords<double>(target);
  return lee_potential_quadrature<D, double>(data, base, std::span<const Complex<double>>(t), abs_tol);
}

// Residual sup norms of the l.c.K. identity for data at an ambient point.
struct LCKResidual {
  double lee_identity = 0.0;  // |d omega - theta ^ omega|
  double lee_closed = 0.0;    // |d theta|
};

template <LCKData D>
LCKResidual base_residual(const D& data, std::span<const std::complex<double>> z) {
  const auto zj = seed_coords<Jet1>(z);
  const std::span<const Complex<Jet1>> zs(zj);
  const PForm<Jet1> omega = herm_to_real2form(data.template omega<Jet1>(zs));
  const std::vector<Jet1> th = data.template theta<Jet1>(zs);
  const PForm<Jet1> theta = one_form<Jet1>(th);
  LCKResidual r;
  r.lee_identity = sup_norm(exterior_d(omega) - wedge(values(theta), values(omega)));
  r.lee_closed = sup_norm(exterior_d(theta));
  return r;
}

}  // namespace lckblow
