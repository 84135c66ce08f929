#pragma once

// Forward-mode jets over the real coordinates x1, y1, ..., xn, yn of a chart
// (z_a = x_a + i y_a, variable index 2a for x_a and 2a+1 for y_a).
//
// Jet1 carries a value and a gradient, Jet2<T> a value, gradient and packed
// symmetric Hessian over an arbitrary scalar T. Jet2<Jet1> therefore carries
// third derivatives, which is what the exterior derivative of a curvature
// form needs.
//
// A jet with fewer active variables than its partner is treated as having
// zero derivatives in the missing slots, so plain doubles promote to
// constant jets implicitly.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace lckblow {

inline constexpr std::size_t kMaxVars = 16;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class Jet1 {
 public:
  Jet1() = default;
  Jet1(double v) : v_(v) {}  // NOLINT: constants promote implicitly

  static Jet1 variable(double v, std::size_t k, std::size_t nvars) {
    if (nvars > kMaxVars || k >= nvars) {
      throw std::out_of_range("Jet1::variable: index out of range");
    }
    Jet1 j(v);
    j.n_ = nvars;
    j.d_[k] = 1.0;
    return j;
  }

  double value() const { return v_; }
  double d(std::size_t k) const { return k < kMaxVars ? d_[k] : 0.0; }
  double& d_ref(std::size_t k) {
    n_ = std::max(n_, k + 1);
    return d_[k];
  }
  std::size_t nvars() const { return n_; }

  friend Jet1 operator+(const Jet1& a, const Jet1& b) {
    Jet1 r(a.v_ + b.v_);
    r.n_ = std::max(a.n_, b.n_);
    for (std::size_t k = 0; k < r.n_; ++k) r.d_[k] = a.d_[k] + b.d_[k];
    return r;
  }
  friend Jet1 operator-(const Jet1& a, const Jet1& b) {
    Jet1 r(a.v_ - b.v_);
    r.n_ = std::max(a.n_, b.n_);
    for (std::size_t k = 0; k < r.n_; ++k) r.d_[k] = a.d_[k] - b.d_[k];
    return r;
  }
  friend Jet1 operator-(const Jet1& a) {
    Jet1 r(-a.v_);
    r.n_ = a.n_;
    for (std::size_t k = 0; k < r.n_; ++k) r.d_[k] = -a.d_[k];
    return r;
  }
  friend Jet1 operator*(const Jet1& a, const Jet1& b) {
    Jet1 r(a.v_ * b.v_);
    r.n_ = std::max(a.n_, b.n_);
    for (std::size_t k = 0; k < r.n_; ++k) r.d_[k] = a.d_[k] * b.v_ + a.v_ * b.d_[k];
    return r;
  }
  friend Jet1 operator/(const Jet1& a, const Jet1& b) {
    if (b.v_ == 0.0) throw DomainError("jet division by a zero-valued denominator");
    const double inv = 1.0 / b.v_;
    Jet1 r(a.v_ * inv);
    r.n_ = std::max(a.n_, b.n_);
    for (std::size_t k = 0; k < r.n_; ++k) r.d_[k] = (a.d_[k] - r.v_ * b.d_[k]) * inv;
    return r;
  }
  Jet1& operator+=(const Jet1& b) { return *this = *this + b; }
  Jet1& operator-=(const Jet1& b) { return *this = *this - b; }
  Jet1& operator*=(const Jet1& b) { return *this = *this * b; }
  Jet1& operator/=(const Jet1& b) { return *this = *this / b; }

  friend Jet1 exp(const Jet1& a) { return a.chain(std::exp(a.v_), std::exp(a.v_)); }
  friend Jet1 log(const Jet1& a) {
    if (!(a.v_ > 0.0)) throw DomainError("log of a non-positive jet value");
    return a.chain(std::log(a.v_), 1.0 / a.v_);
  }
  friend Jet1 sqrt(const Jet1& a) {
    if (!(a.v_ > 0.0)) throw DomainError("sqrt of a non-positive jet value");
    const double s = std::sqrt(a.v_);
    return a.chain(s, 0.5 / s);
  }

 private:
  Jet1 chain(double f0, double f1) const {
    Jet1 r(f0);
    r.n_ = n_;
    for (std::size_t k = 0; k < n_; ++k) r.d_[k] = f1 * d_[k];
    return r;
  }

  double v_ = 0.0;
  std::array<double, kMaxVars> d_{};
  std::size_t n_ = 0;
};

inline double value_of(double x) { return x; }
inline double value_of(const Jet1& x) { return x.value(); }

// Packed upper-triangular index of a symmetric (i, j) entry.
constexpr std::size_t sym_index(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return j * (j + 1) / 2 + i;
}

template <class T>
class Jet2 {
 public:
  using scalar_type = T;

  Jet2() : v_(0.0) {}
  Jet2(double c) : v_(c) {}  // NOLINT: constants promote implicitly
  template <class U = T>
    requires(!std::is_same_v<U, double>)
  explicit Jet2(const T& c) : v_(c) {}

  // Coordinate k of nvars at the given value: grad = e_k, hess = 0.
  static Jet2 variable(double value, std::size_t k, std::size_t nvars) {
    if (nvars > kMaxVars || k >= nvars) {
      throw std::out_of_range("Jet2::variable: index out of range");
    }
    Jet2 j;
    if constexpr (std::is_same_v<T, double>) {
      j.v_ = value;
    } else {
      j.v_ = T::variable(value, k, nvars);
    }
    j.widen(nvars);
    j.g_[k] = T(1.0);
    return j;
  }

  const T& value() const { return v_; }
  T grad(std::size_t i) const { return i < n_ ? g_[i] : T(0.0); }
  T hess(std::size_t i, std::size_t j) const {
    return (i < n_ && j < n_) ? h_[sym_index(i, j)] : T(0.0);
  }
  std::size_t nvars() const { return n_; }

  friend Jet2 operator+(const Jet2& a, const Jet2& b) {
    Jet2 r(a);
    r.widen(b.n_);
    r.v_ = r.v_ + b.v_;
    for (std::size_t i = 0; i < b.n_; ++i) r.g_[i] = r.g_[i] + b.g_[i];
    for (std::size_t k = 0; k < b.h_.size(); ++k) r.h_[k] = r.h_[k] + b.h_[k];
    return r;
  }
  friend Jet2 operator-(const Jet2& a) {
    Jet2 r(a);
    r.v_ = -r.v_;
    for (auto& x : r.g_) x = -x;
    for (auto& x : r.h_) x = -x;
    return r;
  }
  friend Jet2 operator-(const Jet2& a, const Jet2& b) { return a + (-b); }

  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    const std::size_t m = std::max(a.n_, b.n_);
    Jet2 r;
    r.v_ = a.v_ * b.v_;
    r.widen(m);
    for (std::size_t i = 0; i < m; ++i) r.g_[i] = a.grad(i) * b.v_ + a.v_ * b.grad(i);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i <= j; ++i) {
        r.h_[sym_index(i, j)] = a.hess(i, j) * b.v_ + a.grad(i) * b.grad(j) +
                                a.grad(j) * b.grad(i) + a.v_ * b.hess(i, j);
      }
    }
    return r;
  }
  friend Jet2 operator/(const Jet2& a, const Jet2& b) {
    if (value_of(b.v_) == 0.0) {
      throw DomainError("jet division by a zero-valued denominator");
    }
    const T inv = T(1.0) / b.v_;
    return a * b.chain(inv, -inv * inv, T(2.0) * inv * inv * inv);
  }
  Jet2& operator+=(const Jet2& b) { return *this = *this + b; }
  Jet2& operator-=(const Jet2& b) { return *this = *this - b; }
  Jet2& operator*=(const Jet2& b) { return *this = *this * b; }
  Jet2& operator/=(const Jet2& b) { return *this = *this / b; }

  friend Jet2 exp(const Jet2& a) {
    using std::exp;
    const T e = exp(a.v_);
    return a.chain(e, e, e);
  }
  friend Jet2 log(const Jet2& a) {
    using std::log;
    if (!(value_of(a.v_) > 0.0)) throw DomainError("log of a non-positive jet value");
    const T inv = T(1.0) / a.v_;
    return a.chain(log(a.v_), inv, -inv * inv);
  }
  friend Jet2 sqrt(const Jet2& a) {
    using std::sqrt;
    if (!(value_of(a.v_) > 0.0)) throw DomainError("sqrt of a non-positive jet value");
    const T s = sqrt(a.v_);
    const T d1 = T(0.5) / s;
    return a.chain(s, d1, -d1 / (T(2.0) * a.v_));
  }

  friend double value_of(const Jet2& a) { return value_of(a.v_); }

 private:
  // f(a) given f, f', f'' evaluated at a's value.
  Jet2 chain(const T& f0, const T& f1, const T& f2) const {
    Jet2 r;
    r.v_ = f0;
    r.widen(n_);
    for (std::size_t i = 0; i < n_; ++i) r.g_[i] = f1 * g_[i];
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t i = 0; i <= j; ++i) {
        r.h_[sym_index(i, j)] = f1 * h_[sym_index(i, j)] + f2 * g_[i] * g_[j];
      }
    }
    return r;
  }

  void widen(std::size_t m) {
    if (m <= n_) return;
    g_.resize(m, T(0.0));
    h_.resize(m * (m + 1) / 2, T(0.0));
    n_ = m;
  }

  T v_;
  std::vector<T> g_;
  std::vector<T> h_;
  std::size_t n_ = 0;
};

using Jet3 = Jet2<Jet1>;

// First-order part of a second-order jet.
inline Jet1 truncate(const Jet2<double>& a) {
  Jet1 r(a.value());
  for (std::size_t k = 0; k < a.nvars(); ++k) r.d_ref(k) = a.grad(k);
  return r;
}

// The partial derivative d/d(var k) as a first-order jet.
inline Jet1 partial(const Jet2<double>& a, std::size_t k) {
  Jet1 r(a.grad(k));
  for (std::size_t l = 0; l < a.nvars(); ++l) r.d_ref(l) = a.hess(k, l);
  return r;
}

template <class T>
struct is_jet2 : std::false_type {};
template <class T>
struct is_jet2<Jet2<T>> : std::true_type {};

// Seeds a scalar of type S as coordinate k of nvars (plain value for double).
template <class S>
S seed_variable(double value, std::size_t k, std::size_t nvars) {
  if constexpr (std::is_same_v<S, double>) {
    return value;
  } else {
    return S::variable(value, k, nvars);
  }
}

}  // namespace lckblow
