#pragma once

#include <algorithm>
#include <cmath>

#include "smi/types.hpp"

namespace smi {

template <typename Derived>
Real max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, Real rtol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  const Real scale = max_abs(m);
  return max_abs(m.derived() - m.derived().adjoint()) <= rtol * std::max<Real>(scale, 1e-300);
}

// Eigenvalues of a Hermitian matrix, descending.
template <typename Derived>
RVector hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  Eigen::SelfAdjointEigenSolver<typename Derived::PlainObject> es(m.derived(),
                                                                  Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian eigendecomposition failed");
  return es.eigenvalues().reverse();
}

// PSD square root of a Hermitian matrix; eigenvalues below zero are clamped,
// so the result is PSD even under floating-point noise.
template <typename Derived>
typename Derived::PlainObject hermitian_sqrt(const Eigen::MatrixBase<Derived>& m) {
  Eigen::SelfAdjointEigenSolver<typename Derived::PlainObject> es(m.derived());
  if (es.info() != Eigen::Success) throw NumericalError("hermitian eigendecomposition failed");
  RVector d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

template <typename DerivedA, typename DerivedB>
auto kronecker(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                      typename DerivedB::Scalar>::ReturnType;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b.derived();
  return out;
}

// log det(I + scale * M) from the eigenvalues of a PSD M; zero modes
// contribute exactly 0.
inline Real logdet_id_plus(const RVector& eigs, Real scale) {
  Real acc = 0.0;
  for (Index i = 0; i < eigs.size(); ++i) {
    const Real x = scale * eigs[i];
    if (x > 0.0) acc += std::log1p(x);
  }
  return acc;
}

// log det(I + M) for Hermitian M with eigenvalues > -1.
template <typename Derived>
Real logdet_id_plus_hermitian(const Eigen::MatrixBase<Derived>& m) {
  const RVector eigs = hermitian_eigenvalues(m);
  Real acc = 0.0;
  for (Index i = 0; i < eigs.size(); ++i) {
    if (eigs[i] <= -1.0) throw NumericalError("log det argument is not positive definite");
    acc += std::log1p(eigs[i]);
  }
  return acc;
}

// Numerical rank of a PSD spectrum at a relative tolerance.
inline Index spectrum_rank(const RVector& eigs, Real rel_tol = 1e-10) {
  const Real top = eigs.size() ? eigs.maxCoeff() : 0.0;
  if (top <= 0.0) return 0;
  return (eigs.array() > rel_tol * top).count();
}

// Column-stacking of a matrix into a vector.
inline CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

// Real part of the Frobenius inner product <a, b> = tr(b^H a).
inline Real real_inner(const CMatrix& a, const CMatrix& b) {
  return a.cwiseProduct(b.conjugate()).sum().real();
}

}  // namespace smi
