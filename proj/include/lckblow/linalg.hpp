#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "lckblow/complex.hpp"

namespace lckblow {

using HermitianMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

template <class T>
HermitianMatrix values(const CMat<T>& m) {
  HermitianMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = value_of(m(i, j));
  }
  return out;
}

inline double max_abs_entry(const HermitianMatrix& h) {
  return h.size() == 0 ? 0.0 : h.cwiseAbs().maxCoeff();
}

// Deviation from Hermitian symmetry, scaled by max(1, max |entry|).
inline double hermitian_defect(const HermitianMatrix& h) {
  if (h.rows() != h.cols()) return INFINITY;
  const double scale = std::max(1.0, max_abs_entry(h));
  return (h - h.adjoint()).cwiseAbs().maxCoeff() / scale;
}

inline void require_hermitian(const HermitianMatrix& h, double tol = 1e-12) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix is not square");
  if (h.size() > 0 && hermitian_defect(h) > tol) {
    throw std::invalid_argument("matrix is not Hermitian");
  }
}

inline Eigen::VectorXd eigenvalues(const HermitianMatrix& h) {
  require_hermitian(h);
  const HermitianMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline double min_eigenvalue(const HermitianMatrix& h) {
  if (h.size() == 0) throw std::invalid_argument("min_eigenvalue of an empty matrix");
  return eigenvalues(h).minCoeff();
}

inline double max_eigenvalue(const HermitianMatrix& h) {
  if (h.size() == 0) throw std::invalid_argument("max_eigenvalue of an empty matrix");
  return eigenvalues(h).maxCoeff();
}

// sum_ab H(a,b) v_a conj(v_b); equals omega(v, Jv)/2 for omega = i H dz^dzbar.
inline double pairing(const HermitianMatrix& h, const ComplexVector& v) {
  return (v.transpose() * h * v.conjugate())(0, 0).real();
}

// Vectors v with pairing(h, v) = 0: conjugates of eigenvectors of h whose
// eigenvalue is at most tol * max|eigenvalue|.
inline Eigen::MatrixXcd pairing_kernel(const HermitianMatrix& h, double tol) {
  require_hermitian(h);
  Eigen::SelfAdjointEigenSolver<HermitianMatrix> solver(0.5 * (h + h.adjoint()));
  const auto& ev = solver.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (std::abs(ev(k)) <= tol * scale) idx.push_back(k);
  }
  Eigen::MatrixXcd out(h.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    out.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(idx[c]).conjugate();
  }
  return out;
}

}  // namespace lckblow
