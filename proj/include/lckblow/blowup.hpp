#pragma once

// Local model of the blow-up of a coordinate polydisc U at its centre.
//
// Charts: Base carries the centred coordinates x of U (valid off the
// exceptional divisor E); Blow(j) carries (t, u_i for i != j) with
//   x_j = t,  x_i = t * u_i,
// so E is {t = 0} and the u_i are the affine coordinates y_i / y_j of the
// projective factor. Chart indices are zero-based in code and printed
// one-based.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lckblow/complex.hpp"
#include "lckblow/linalg.hpp"

namespace lckblow {

struct ChartId {
  enum class Kind { Base, Blow };
  Kind kind = Kind::Base;
  std::size_t index = 0;

  static ChartId base() { return {Kind::Base, 0}; }
  static ChartId blow(std::size_t j) { return {Kind::Blow, j}; }
  bool is_blow() const { return kind == Kind::Blow; }
  friend bool operator==(const ChartId&, const ChartId&) = default;

  std::string name() const {
    return is_blow() ? "Blow(" + std::to_string(index + 1) + ")" : "Base";
  }
};

struct ChartPoint {
  ChartId chart;
  std::vector<std::complex<double>> coords;

  std::size_t dim() const { return coords.size(); }
  bool on_exceptional() const { return chart.is_blow() && coords.at(0) == 0.0; }
};

class ChartDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Position of u_i inside Blow(j) coordinates.
inline std::size_t u_slot(std::size_t j, std::size_t i) { return i < j ? i + 1 : i; }

// Homogeneous coordinates y with y_j = 1 of a Blow(j) point.
template <class T>
CVec<T> homogeneous(std::size_t j, std::span<const Complex<T>> w) {
  CVec<T> y(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) y[i] = (i == j) ? Complex<T>(1.0) : w[u_slot(j, i)];
  return y;
}

// The blow-down c : U-hat -> U in chart coordinates.
template <class T>
CVec<T> blowdown(const ChartId& chart, std::span<const Complex<T>> w) {
  CVec<T> x(w.begin(), w.end());
  if (!chart.is_blow()) return x;
  const std::size_t j = chart.index;
  const Complex<T>& t = w[0];
  for (std::size_t i = 0; i < w.size(); ++i) x[i] = (i == j) ? t : t * w[u_slot(j, i)];
  return x;
}

inline std::vector<std::complex<double>> blowdown(const ChartPoint& p) {
  const auto w = constant_coords<double>(p.coords);
  const auto x = blowdown<double>(p.chart, w);
  std::vector<std::complex<double>> out;
  for (const auto& c : x) out.push_back(value_of(c));
  return out;
}

// Holomorphic Jacobian d(x)/d(w) of the blow-down (rows: x, columns: w).
template <class T>
CMat<T> jacobian_blowdown(const ChartId& chart, std::span<const Complex<T>> w) {
  const std::size_t n = w.size();
  if (!chart.is_blow()) return CMat<T>::identity(n);
  const std::size_t j = chart.index;
  CMat<T> jac(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == j) {
      jac(i, 0) = Complex<T>(1.0);
    } else {
      const std::size_t s = u_slot(j, i);
      jac(i, 0) = w[s];
      jac(i, s) = w[0];
    }
  }
  return jac;
}

inline HermitianMatrix jacobian_blowdown(const ChartPoint& p) {
  const auto w = constant_coords<double>(p.coords);
  return values(jacobian_blowdown<double>(p.chart, w));
}

// Re-expresses a point in another chart. Base -> Blow(k) needs x_k != 0,
// Blow(j) -> Blow(k) needs u_k != 0, Blow -> Base needs t != 0.
inline ChartPoint chart_transition(const ChartPoint& p, const ChartId& target) {
  const std::size_t n = p.dim();
  if (p.chart == target) return p;
  if (target.is_blow() && target.index >= n) throw std::out_of_range("chart index out of range");
  if (!target.is_blow()) {
    if (p.on_exceptional()) {
      throw ChartDomainError("point on the exceptional divisor has no Base coordinates");
    }
    return {target, blowdown(p)};
  }
  const std::size_t k = target.index;
  std::vector<std::complex<double>> y;  // homogeneous direction
  std::complex<double> scale;           // x = scale * y
  if (!p.chart.is_blow()) {
    y = p.coords;
    scale = 1.0;
  } else {
    const auto w = constant_coords<double>(p.coords);
    for (const auto& c : homogeneous<double>(p.chart.index, w)) y.push_back(value_of(c));
    scale = p.coords[0];
  }
  const std::complex<double> yk = y[k];
  if (yk == 0.0) {
    throw ChartDomainError("chart transition to " + target.name() + ": ratio vanishes at the point");
  }
  std::vector<std::complex<double>> out(n);
  out[0] = scale * yk;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != k) out[u_slot(k, i)] = y[i] / yk;
  }
  return {target, out};
}

// Holomorphic Jacobian of chart_transition at p (rows: target coordinates).
inline HermitianMatrix jacobian_transition(const ChartPoint& p, const ChartId& target) {
  const std::size_t n = p.dim();
  if (p.chart == target) return HermitianMatrix::Identity(n, n);
  if (!target.is_blow()) return jacobian_blowdown(p);
  const std::size_t k = target.index;
  if (!p.chart.is_blow()) {
    // t' = x_k, u'_i = x_i / x_k.
    const auto& x = p.coords;
    if (x[k] == 0.0) throw ChartDomainError("jacobian_transition: x_k vanishes");
    HermitianMatrix jac = HermitianMatrix::Zero(n, n);
    jac(0, k) = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const std::size_t s = u_slot(k, i);
      jac(s, i) = 1.0 / x[k];
      jac(s, k) = -x[i] / (x[k] * x[k]);
    }
    return jac;
  }
  const std::size_t j = p.chart.index;
  const auto& w = p.coords;
  const std::size_t sk = u_slot(j, k);
  const std::complex<double> uk = w[sk];
  if (uk == 0.0) throw ChartDomainError("jacobian_transition: ratio vanishes");
  HermitianMatrix jac = HermitianMatrix::Zero(n, n);
  // t' = t u_k
  jac(0, 0) = uk;
  jac(0, sk) = w[0];
  for (std::size_t i = 0; i < n; ++i) {
    if (i == k) continue;
    const std::size_t out = u_slot(k, i);
    if (i == j) {
      // u'_j = 1 / u_k
      jac(out, sk) = -1.0 / (uk * uk);
    } else {
      // u'_i = u_i / u_k
      const std::size_t si = u_slot(j, i);
      jac(out, si) = 1.0 / uk;
      jac(out, sk) = -w[si] / (uk * uk);
    }
  }
  return jac;
}

// Real 2n x 2n Jacobian of a holomorphic map from its complex Jacobian
// (Cauchy-Riemann blocks [[Re, -Im], [Im, Re]]).
template <class T>
Matrix<T> realify(const CMat<T>& jac) {
  Matrix<T> r(2 * jac.rows(), 2 * jac.cols());
  for (std::size_t a = 0; a < jac.rows(); ++a) {
    for (std::size_t c = 0; c < jac.cols(); ++c) {
      const auto& e = jac(a, c);
      r(2 * a, 2 * c) = e.re;
      r(2 * a, 2 * c + 1) = -e.im;
      r(2 * a + 1, 2 * c) = e.im;
      r(2 * a + 1, 2 * c + 1) = e.re;
    }
  }
  return r;
}

// Pullback of omega = i sum H dz_a ^ dzbar_b through a holomorphic map with
// Jacobian J: the coefficient matrix J^T H conj(J).
template <class T>
CMat<T> pullback_herm(const CMat<T>& h, const CMat<T>& jac) {
  const std::size_t n = jac.cols();
  CMat<T> out(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t d = 0; d < n; ++d) {
      Complex<T> acc;
      for (std::size_t a = 0; a < h.rows(); ++a) {
        for (std::size_t b = 0; b < h.cols(); ++b) {
          acc += jac(a, c) * h(a, b) * conj(jac(b, d));
        }
      }
      out(c, d) = acc;
    }
  }
  return out;
}

inline HermitianMatrix pullback_herm(const HermitianMatrix& h, const HermitianMatrix& jac) {
  return jac.transpose() * h * jac.conjugate();
}

// Pullback of a real covector: xi' = JR^T xi.
template <class T>
std::vector<T> pullback_oneform(std::span<const T> xi, const CMat<T>& jac) {
  const Matrix<T> jr = realify(jac);
  if (xi.size() != jr.rows()) throw std::invalid_argument("pullback_oneform: size mismatch");
  std::vector<T> out(jr.cols(), T(0.0));
  for (std::size_t c = 0; c < jr.cols(); ++c) {
    for (std::size_t k = 0; k < jr.rows(); ++k) out[c] = out[c] + xi[k] * jr(k, c);
  }
  return out;
}

inline Eigen::VectorXd pullback_oneform(const Eigen::VectorXd& xi, const HermitianMatrix& jac) {
  CMat<double> j(jac.rows(), jac.cols());
  for (Eigen::Index a = 0; a < jac.rows(); ++a) {
    for (Eigen::Index c = 0; c < jac.cols(); ++c) j(a, c) = Complex<double>(jac(a, c));
  }
  std::vector<double> v(xi.data(), xi.data() + xi.size());
  const auto r = pullback_oneform<double>(v, j);
  return Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
}

// Fubini-Study coefficients ((1+|u|^2) delta_ab - conj(u_a) u_b) / (1+|u|^2)^2
// on an affine chart of P^{m}, m = u.size().
template <class T>
CMat<T> fubini_study(std::span<const Complex<T>> u) {
  const std::size_t m = u.size();
  T s(1.0);
  for (const auto& c : u) s = s + norm2(c);
  const T inv2 = T(1.0) / (s * s);
  CMat<T> out(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      Complex<T> e = -(conj(u[a]) * u[b]);
      if (a == b) e.re = e.re + s;
      out(a, b) = Complex<T>(e.re * inv2, e.im * inv2);
    }
  }
  return out;
}

inline HermitianMatrix fubini_study(std::span<const std::complex<double>> u) {
  const auto uu = constant_coords<double>(u);
  return values(fubini_study<double>(uu));
}

// Affine coordinates of pi'(p), i.e. the u-part of Blow(j) coordinates.
template <class T>
CVec<T> projective_coords(std::span<const Complex<T>> w) {
  return CVec<T>(w.begin() + 1, w.end());
}

// Holomorphic Jacobian of pi' : Blow(j) -> affine chart (drops t).
template <class T>
CMat<T> jacobian_projection(std::size_t n) {
  CMat<T> jac(n - 1, n);
  for (std::size_t i = 0; i + 1 < n; ++i) jac(i, i + 1) = Complex<T>(1.0);
  return jac;
}

// Basis of T_p(E) at a point of E: the u coordinate directions.
inline std::vector<ComplexVector> exceptional_tangent(const ChartPoint& p) {
  if (!p.on_exceptional()) {
    throw ChartDomainError("exceptional_tangent: point is not on the exceptional divisor");
  }
  const std::size_t n = p.dim();
  std::vector<ComplexVector> basis;
  for (std::size_t s = 1; s < n; ++s) {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(n));
    v(static_cast<Eigen::Index>(s)) = 1.0;
    basis.push_back(v);
  }
  return basis;
}

inline double max_abs(std::span<const std::complex<double>> x) {
  double m = 0.0;
  for (const auto& c : x) m = std::max(m, std::abs(c));
  return m;
}

// Nested polydiscs U_rho = {max_i |x_i| < rho} around the blow-up centre P.
// Membership on blow charts goes through the blow-down, so E lies in every
// U_rho.
struct Region {
  std::vector<std::complex<double>> center;  // P in ambient coordinates
  double polyradius = 0.0;                   // radius of U itself

  std::size_t dim() const { return center.size(); }

  std::vector<std::complex<double>> to_ambient(std::span<const std::complex<double>> x) const {
    std::vector<std::complex<double>> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = center[i] + x[i];
    return z;
  }

  // max_i |x_i(c(p))|
  static double level(const ChartPoint& p) { return max_abs(blowdown(p)); }

  static bool inside(const ChartPoint& p, double rho) { return level(p) < rho; }
};

}  // namespace lckblow
