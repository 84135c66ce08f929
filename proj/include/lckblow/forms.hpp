#pragma once

// Real differential forms at a point, in the basis dx^{i1} ^ ... ^ dx^{ip}
// (i1 < ... < ip) of the 2n real chart coordinates. Coefficients are stored
// only for increasing index sets, so antisymmetry holds by construction.
//
// Form coefficients may be jets; exterior_d consumes first-order jets and
// returns plain values.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lckblow/complex.hpp"
#include "lckblow/linalg.hpp"

namespace lckblow {

constexpr std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Colexicographic rank of an increasing index set.
inline std::size_t combination_rank(std::span<const int> idx) {
  std::size_t r = 0;
  for (std::size_t l = 0; l < idx.size(); ++l) {
    r += binomial(static_cast<std::size_t>(idx[l]), l + 1);
  }
  return r;
}

// Calls fn(indices) for every increasing p-subset of {0..m-1} in colex order,
// which matches combination_rank.
template <class Fn>
void for_each_combination(std::size_t m, std::size_t p, Fn&& fn) {
  if (p > m) return;
  std::vector<int> c(p);
  for (std::size_t l = 0; l < p; ++l) c[l] = static_cast<int>(l);
  while (true) {
    fn(std::span<const int>(c));
    if (p == 0) return;
    std::size_t l = 0;
    while (l < p) {
      const int limit = (l + 1 < p) ? c[l + 1] : static_cast<int>(m);
      if (c[l] + 1 < limit) break;
      ++l;
    }
    if (l == p) return;
    ++c[l];
    for (std::size_t k = 0; k < l; ++k) c[k] = static_cast<int>(k);
  }
}

// Sign of the permutation sorting idx, or 0 if an index repeats. Sorts idx.
inline int sort_with_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    for (std::size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  }
  return sign;
}

template <class T>
class PForm {
 public:
  PForm() = default;
  PForm(std::size_t dim, std::size_t degree)
      : dim_(dim), degree_(degree), coeffs_(binomial(dim, degree), T(0.0)) {
    if (degree > dim) throw std::invalid_argument("form degree exceeds dimension");
  }

  std::size_t dim() const { return dim_; }
  std::size_t degree() const { return degree_; }
  std::size_t size() const { return coeffs_.size(); }

  // Coefficient for an increasing index set.
  T& at(std::span<const int> idx) { return coeffs_[combination_rank(idx)]; }
  const T& at(std::span<const int> idx) const { return coeffs_[combination_rank(idx)]; }
  T& at(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }
  const T& at(std::initializer_list<int> idx) const {
    return at(std::span<const int>(idx.begin(), idx.size()));
  }

  // Antisymmetric access for an arbitrary index tuple.
  T get(std::vector<int> idx) const {
    if (idx.size() != degree_) throw std::invalid_argument("wrong number of form indices");
    const int sign = sort_with_sign(idx);
    if (sign == 0) return T(0.0);
    const T& c = at(std::span<const int>(idx));
    return sign > 0 ? c : T(-c);
  }

  const std::vector<T>& coeffs() const { return coeffs_; }
  std::vector<T>& coeffs() { return coeffs_; }

  friend PForm operator+(const PForm& a, const PForm& b) {
    check_same(a, b);
    PForm r(a);
    for (std::size_t k = 0; k < r.coeffs_.size(); ++k) r.coeffs_[k] = r.coeffs_[k] + b.coeffs_[k];
    return r;
  }
  friend PForm operator-(const PForm& a, const PForm& b) {
    check_same(a, b);
    PForm r(a);
    for (std::size_t k = 0; k < r.coeffs_.size(); ++k) r.coeffs_[k] = r.coeffs_[k] - b.coeffs_[k];
    return r;
  }
  friend PForm operator*(const T& s, const PForm& a) {
    PForm r(a);
    for (auto& c : r.coeffs_) c = s * c;
    return r;
  }

 private:
  static void check_same(const PForm& a, const PForm& b) {
    if (a.dim_ != b.dim_ || a.degree_ != b.degree_) {
      throw std::invalid_argument("form shape mismatch");
    }
  }

  std::size_t dim_ = 0;
  std::size_t degree_ = 0;
  std::vector<T> coeffs_;
};

using RealPForm = PForm<double>;

template <class T>
PForm<T> one_form(std::span<const T> components) {
  PForm<T> f(components.size(), 1);
  for (std::size_t k = 0; k < components.size(); ++k) f.coeffs()[k] = components[k];
  return f;
}

template <class T>
PForm<double> values(const PForm<T>& f) {
  PForm<double> r(f.dim(), f.degree());
  for (std::size_t k = 0; k < f.size(); ++k) r.coeffs()[k] = value_of(f.coeffs()[k]);
  return r;
}

// Coefficient sup norm.
inline double sup_norm(const RealPForm& f) {
  double m = 0.0;
  for (double c : f.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

template <class T>
PForm<T> wedge(const PForm<T>& a, const PForm<T>& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge: dimension mismatch");
  if (a.degree() + b.degree() > a.dim()) throw std::invalid_argument("wedge: degree overflow");
  PForm<T> r(a.dim(), a.degree() + b.degree());
  std::vector<int> merged(r.degree());
  for_each_combination(a.dim(), a.degree(), [&](std::span<const int> I) {
    const T& ai = a.at(I);
    for_each_combination(b.dim(), b.degree(), [&](std::span<const int> J) {
      std::size_t inversions = 0;
      for (int i : I) {
        for (int j : J) {
          if (i == j) return;
          if (i > j) ++inversions;
        }
      }
      std::merge(I.begin(), I.end(), J.begin(), J.end(), merged.begin());
      const T term = ai * b.at(J);
      T& slot = r.at(std::span<const int>(merged));
      slot = (inversions % 2 == 0) ? slot + term : slot - term;
    });
  });
  return r;
}

// d of a form whose coefficients are first-order jets in the chart
// coordinates: (d alpha)_K = sum_l (-1)^l d_{k_l} alpha_{K without k_l}.
inline RealPForm exterior_d(const PForm<Jet1>& alpha) {
  if (alpha.degree() + 1 > alpha.dim()) throw std::invalid_argument("exterior_d: degree overflow");
  RealPForm r(alpha.dim(), alpha.degree() + 1);
  std::vector<int> K(r.degree());
  for_each_combination(alpha.dim(), alpha.degree(), [&](std::span<const int> I) {
    const Jet1& c = alpha.at(I);
    for (std::size_t k = 0; k < alpha.dim(); ++k) {
      const int kk = static_cast<int>(k);
      if (std::find(I.begin(), I.end(), kk) != I.end()) continue;
      std::size_t pos = 0;
      while (pos < I.size() && I[pos] < kk) ++pos;
      std::copy(I.begin(), I.begin() + static_cast<std::ptrdiff_t>(pos), K.begin());
      K[pos] = kk;
      std::copy(I.begin() + static_cast<std::ptrdiff_t>(pos), I.end(),
                K.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
      const double term = (pos % 2 == 0) ? c.d(k) : -c.d(k);
      r.at(std::span<const int>(K)) += term;
    }
  });
  return r;
}

// Value of a p-form on p real tangent vectors.
inline double evaluate(const RealPForm& f, std::span<const Eigen::VectorXd> vectors) {
  if (vectors.size() != f.degree()) throw std::invalid_argument("evaluate: wrong vector count");
  const std::size_t p = f.degree();
  double total = 0.0;
  Eigen::MatrixXd minor(p, p);
  for_each_combination(f.dim(), p, [&](std::span<const int> I) {
    const double c = f.at(I);
    if (c == 0.0) return;
    for (std::size_t l = 0; l < p; ++l) {
      for (std::size_t k = 0; k < p; ++k) minor(l, k) = vectors[k](I[l]);
    }
    total += c * (p == 0 ? 1.0 : minor.determinant());
  });
  return total;
}

// omega = i sum_ab H(a,b) dz_a ^ dzbar_b written in the real basis. With
// H = A + iB: coefficient 2A(a,b) on dx_a ^ dy_b and -2B(a,b) on dx_a ^ dx_b
// and dy_a ^ dy_b (a < b).
template <class T>
PForm<T> herm_to_real2form(const CMat<T>& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("herm_to_real2form: not square");
  require_hermitian(values(h));
  const int n = static_cast<int>(h.rows());
  PForm<T> r(2 * h.rows(), 2);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const T two_re = T(2.0) * h(a, b).re;
      if (a <= b) {
        r.at({2 * a, 2 * b + 1}) = two_re;
      } else {
        r.at({2 * b + 1, 2 * a}) = -two_re;
      }
      if (a < b) {
        const T two_im = T(2.0) * h(a, b).im;
        r.at({2 * a, 2 * b}) = -two_im;
        r.at({2 * a + 1, 2 * b + 1}) = -two_im;
      }
    }
  }
  return r;
}

inline RealPForm herm_to_real2form(const HermitianMatrix& h) {
  CMat<double> m(static_cast<std::size_t>(h.rows()), static_cast<std::size_t>(h.cols()));
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    for (Eigen::Index j = 0; j < h.cols(); ++j) m(i, j) = Complex<double>(h(i, j));
  }
  return herm_to_real2form(m);
}

// Inverse of herm_to_real2form; rejects forms that are not of type (1,1).
inline HermitianMatrix real2form_to_herm(const RealPForm& f, double tol = 1e-12) {
  if (f.degree() != 2 || f.dim() % 2 != 0) {
    throw std::invalid_argument("real2form_to_herm: need a 2-form in even dimension");
  }
  const int n = static_cast<int>(f.dim() / 2);
  double scale = std::max(1.0, sup_norm(f));
  HermitianMatrix h(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double re = 0.5 * f.get({2 * a, 2 * b + 1});
      const double re_t = 0.5 * f.get({2 * b, 2 * a + 1});
      if (std::abs(re - re_t) > tol * scale) {
        throw std::invalid_argument("real2form_to_herm: form is not of type (1,1)");
      }
      double im = 0.0;
      if (a != b) {
        const double xx = f.get({2 * a, 2 * b});
        const double yy = f.get({2 * a + 1, 2 * b + 1});
        if (std::abs(xx - yy) > tol * scale) {
          throw std::invalid_argument("real2form_to_herm: form is not of type (1,1)");
        }
        im = -0.5 * xx;
      }
      h(a, b) = {re, im};
    }
  }
  return h;
}

}  // namespace lckblow
