#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "lckblow/jet.hpp"

namespace lckblow {

// Complex number over a real scalar that may be a jet. std::complex is only
// specified for floating-point types, hence this small replacement.
template <class T>
struct Complex {
  T re{0.0};
  T im{0.0};

  Complex() = default;
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}
  Complex(double r) : re(r), im(0.0) {}  // NOLINT
  Complex(std::complex<double> c) : re(c.real()), im(c.imag()) {}  // NOLINT

  friend Complex operator+(const Complex& a, const Complex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Complex operator-(const Complex& a, const Complex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    const T den = b.re * b.re + b.im * b.im;
    if (value_of(den) == 0.0) throw DomainError("complex jet division by zero");
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
  Complex& operator+=(const Complex& b) { return *this = *this + b; }
  Complex& operator-=(const Complex& b) { return *this = *this - b; }
  Complex& operator*=(const Complex& b) { return *this = *this * b; }

  friend Complex operator*(const T& s, const Complex& a) { return {s * a.re, s * a.im}; }
  friend Complex conj(const Complex& a) { return {a.re, -a.im}; }
  // |a|^2
  friend T norm2(const Complex& a) { return a.re * a.re + a.im * a.im; }
};

template <class T>
std::complex<double> value_of(const Complex<T>& c) {
  return {value_of(c.re), value_of(c.im)};
}

template <class T>
using CVec = std::vector<Complex<T>>;

// Row-major dense matrix over any scalar; used for jet-valued coefficient
// matrices. Plain double data goes through Eigen (see linalg.hpp).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix r(a);
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = r.data_[k] + b.data_[k];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix r(a);
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = r.data_[k] - b.data_[k];
    return r;
  }
  template <class S>
  friend Matrix scaled(const S& s, const Matrix& a) {
    Matrix r(a);
    for (auto& x : r.data_) x = s * x;
    return r;
  }

 private:
  static void check_same(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
      throw std::invalid_argument("matrix shape mismatch");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
using CMat = Matrix<Complex<T>>;

// A^T B conj(A)-style products are spelled out where used; this is the plain
// product.
template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
  Matrix<T> r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      T acc(0.0);
      for (std::size_t k = 0; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
      r(i, j) = acc;
    }
  }
  return r;
}

// Seeds complex chart coordinates as jets over their 2n real parts.
template <class S>
CVec<S> seed_coords(std::span<const std::complex<double>> w) {
  const std::size_t m = 2 * w.size();
  CVec<S> out;
  out.reserve(w.size());
  for (std::size_t a = 0; a < w.size(); ++a) {
    out.emplace_back(seed_variable<S>(w[a].real(), 2 * a, m),
                     seed_variable<S>(w[a].imag(), 2 * a + 1, m));
  }
  return out;
}

template <class T>
CVec<T> constant_coords(std::span<const std::complex<double>> w) {
  CVec<T> out;
  out.reserve(w.size());
  for (const auto& c : w) out.emplace_back(T(c.real()), T(c.imag()));
  return out;
}

struct WirtingerPair {
  std::complex<double> dz;
  std::complex<double> dzbar;
};

// d/dz_a = (d/dx_a - i d/dy_a)/2 and d/dzbar_a = (d/dx_a + i d/dy_a)/2 of a
// real-valued jet; coordinate index a is zero-based.
template <class J>
WirtingerPair wirtinger(const J& j, std::size_t a) {
  const double gx = value_of(j.grad(2 * a));
  const double gy = value_of(j.grad(2 * a + 1));
  return {{0.5 * gx, -0.5 * gy}, {0.5 * gx, 0.5 * gy}};
}

// M(a, b) = d^2 phi / dz_a dzbar_b, assembled from the real Hessian. Hermitian
// exactly, because the Hessian is stored symmetric.
template <class T>
CMat<T> ddbar(const Jet2<T>& phi, std::size_t n) {
  CMat<T> m(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const T re = phi.hess(2 * a, 2 * b) + phi.hess(2 * a + 1, 2 * b + 1);
      const T im = phi.hess(2 * a, 2 * b + 1) - phi.hess(2 * a + 1, 2 * b);
      m(a, b) = Complex<T>(T(0.25) * re, T(0.25) * im);
    }
  }
  return m;
}

}  // namespace lckblow
