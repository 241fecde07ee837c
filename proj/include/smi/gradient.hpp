#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "smi/rmt.hpp"

namespace smi {

// Gradients follow the conjugate Wirtinger convention d/dF*; the returned
// matrix is the ascent direction of the real objective.
struct GradientReport {
  CMatrix grad;
  std::vector<CMatrix> per_term;      // one ascent contribution per receive mode
  std::optional<Real> fd_check;       // max relative deviation vs finite differences
};

namespace detail {

// Eigen-decomposition of T(F) together with the two cached products every
// per-mode gradient needs: B = R_T^{1/2} U and C = U^H R_T^{1/2} F.
struct GramBasis {
  RVector values;
  CMatrix left;   // R_T^{1/2} U, n_tx x n_tx
  CMatrix right;  // U^H R_T^{1/2} F, n_tx x k
};

inline GramBasis make_gram_basis(const CMatrix& r_tx_sqrt, const CMatrix& f) {
  CMatrix w = r_tx_sqrt * f;
  CMatrix gram = w * w.adjoint();
  gram = 0.5 * (gram + gram.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
  if (es.info() != Eigen::Success) throw NumericalError("gram eigendecomposition failed");
  GramBasis basis;
  basis.values = es.eigenvalues().cwiseMax(0.0);
  basis.left = r_tx_sqrt * es.eigenvectors();
  basis.right = es.eigenvectors().adjoint() * w;
  return basis;
}

// d(delta)/dF* = R^{1/2} (I + alpha T)^{-2} R^{1/2} F / denom with
// denom = n - alpha^2 tr[(T (I + alpha T)^{-1})^2], assembled in the
// eigenbasis of T.
inline CMatrix delta_gradient_core(const GramBasis& basis, Real alpha, Real n_frames) {
  const RVector scale = (1.0 + alpha * basis.values.array()).inverse().square().matrix();
  Real tr_tm2 = 0.0;
  for (Index i = 0; i < basis.values.size(); ++i) {
    const Real r = basis.values[i] / (1.0 + alpha * basis.values[i]);
    tr_tm2 += r * r;
  }
  const Real denom = n_frames - alpha * alpha * tr_tm2;
  if (!(denom > 1e-12 * n_frames))
    throw SingularSensitivityError("fixed-point sensitivity denominator vanished");
  return (basis.left * scale.asDiagonal() * basis.right) / denom;
}

// Ascent contribution of one receive mode. The delta-coefficient assembles
// the chain rule through the load equation; at the exact fixed point it
// cancels analytically, so the finite-difference check is the arbiter of
// this form.
inline CMatrix mode_gradient_core(const GramBasis& basis, Real lambda, Real delta,
                                  Real n_frames) {
  const Real alpha = lambda / (1.0 + lambda * delta);
  const CMatrix dgrad = delta_gradient_core(basis, alpha, n_frames);
  const RVector minv = (1.0 + alpha * basis.values.array()).inverse().matrix();
  Real tr_mt = 0.0;
  for (Index i = 0; i < basis.values.size(); ++i) tr_mt += basis.values[i] * minv[i];
  const Real one_plus = 1.0 + lambda * delta;
  const Real coeff = -alpha * alpha * tr_mt + n_frames * alpha
                     - n_frames * lambda / (one_plus * one_plus);
  return alpha * (basis.left * minv.asDiagonal() * basis.right) + coeff * dgrad;
}

}  // namespace detail

// Gradient of the load-equation solution delta(rho) with respect to F*.
// `fixed_point` must hold the solution for this gram/rho/n_frames triple.
inline CMatrix delta_gradient(const CorrelationPair& corr, const Precoder& precoder, Real rho,
                              const FixedPointSolution& fixed_point, const Scenario& scenario) {
  detail::check_dims(corr, precoder, scenario);
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be >= 0");
  const detail::GramBasis basis = detail::make_gram_basis(corr.r_tx_sqrt, precoder.f);
  return detail::delta_gradient_core(basis, fixed_point.alpha(),
                                     static_cast<Real>(scenario.n_frames));
}

// Euclidean (conjugate Wirtinger) gradient of the asymptotic SMI in F.
inline GradientReport euclidean_gradient(const CorrelationPair& corr, const Precoder& precoder,
                                         const Scenario& scenario) {
  detail::check_dims(corr, precoder, scenario);
  const RVector lambdas = receive_eigenvalues(corr, scenario.noise_power);
  const detail::GramBasis basis = detail::make_gram_basis(corr.r_tx_sqrt, precoder.f);
  const Real n = static_cast<Real>(scenario.n_frames);

  GradientReport report;
  report.grad = CMatrix::Zero(precoder.f.rows(), precoder.f.cols());
  for (Index j = 0; j < lambdas.size(); ++j) {
    const Real lambda = lambdas[j];
    if (!(lambda > 0.0)) {
      report.per_term.push_back(CMatrix::Zero(precoder.f.rows(), precoder.f.cols()));
      continue;
    }
    const FixedPointSolution sol = solve_delta_spectrum(basis.values, lambda, n);
    CMatrix term = detail::mode_gradient_core(basis, lambda, sol.delta, n);
    report.grad += term;
    report.per_term.push_back(std::move(term));
  }
  if (!report.grad.allFinite()) throw NumericalError("gradient contains non-finite entries");
  return report;
}

// Gradient of the Jensen-bound objective:
// sum_j lambda_j R^{1/2} (I + lambda_j T)^{-1} R^{1/2} F.
inline CMatrix ub_euclidean_gradient(const CorrelationPair& corr, const Precoder& precoder,
                                     const Scenario& scenario) {
  detail::check_dims(corr, precoder, scenario);
  const RVector lambdas = receive_eigenvalues(corr, scenario.noise_power);
  const detail::GramBasis basis = detail::make_gram_basis(corr.r_tx_sqrt, precoder.f);
  CMatrix grad = CMatrix::Zero(precoder.f.rows(), precoder.f.cols());
  for (Index j = 0; j < lambdas.size(); ++j) {
    const Real lambda = lambdas[j];
    if (!(lambda > 0.0)) continue;
    const RVector minv = (1.0 + lambda * basis.values.array()).inverse().matrix();
    grad += lambda * (basis.left * minv.asDiagonal() * basis.right);
  }
  return grad;
}

// Central differences along the real and imaginary axis of every entry,
// combined as (d/dRe + i d/dIm) / 2 to match the d/dF* convention.
inline CMatrix finite_difference_gradient(const std::function<Real(const CMatrix&)>& objective,
                                          const CMatrix& f, Real step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be > 0");
  CMatrix grad(f.rows(), f.cols());
  CMatrix probe = f;
  auto eval = [&](Index r, Index c, Complex bump) {
    probe(r, c) = f(r, c) + bump;
    const Real v = objective(probe);
    probe(r, c) = f(r, c);
    if (!std::isfinite(v)) throw NumericalError("objective non-finite at perturbed point");
    return v;
  };
  for (Index c = 0; c < f.cols(); ++c) {
    for (Index r = 0; r < f.rows(); ++r) {
      const Real dre = (eval(r, c, {step, 0}) - eval(r, c, {-step, 0})) / (2.0 * step);
      const Real dim = (eval(r, c, {0, step}) - eval(r, c, {0, -step})) / (2.0 * step);
      grad(r, c) = 0.5 * Complex(dre, dim);
    }
  }
  return grad;
}

// Max relative entrywise deviation between an analytic gradient and its
// finite-difference counterpart, normalized by max(1, ||analytic||_inf).
inline Real gradient_deviation(const CMatrix& analytic, const CMatrix& fd) {
  const Real scale = std::max(1.0, max_abs(analytic));
  return max_abs(analytic - fd) / scale;
}

}  // namespace smi
