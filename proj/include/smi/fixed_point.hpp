#pragma once

#include <cmath>
#include <optional>

#include "smi/linalg.hpp"
#include "smi/types.hpp"

namespace smi {

enum class SolveMethod { fixed_point_iteration, bisection };

// Solution of delta = tr[T (I + rho/(1+rho*delta) T)^{-1}] / n_frames,
// the scalar load equation behind the asymptotic SMI.
struct FixedPointSolution {
  Real rho = 0.0;
  Real delta = 0.0;
  Real residual = 0.0;
  int iterations = 0;
  SolveMethod method = SolveMethod::fixed_point_iteration;

  // Resolvent scale alpha(rho) = rho / (1 + rho * delta).
  Real alpha() const { return rho / (1.0 + rho * delta); }
};

namespace detail {

// tr[T (I + alpha T)^{-1}] / n in the eigenbasis of T.
inline Real delta_rhs(const RVector& eigs, Real rho, Real delta, Real n_frames) {
  const Real alpha = rho / (1.0 + rho * delta);
  Real acc = 0.0;
  for (Index i = 0; i < eigs.size(); ++i) acc += eigs[i] / (1.0 + alpha * eigs[i]);
  return acc / n_frames;
}

}  // namespace detail

// Solves the load equation on the spectrum of T. The right-hand side is
// increasing in delta with slope < 1, so plain iteration from the rho = 0
// value tr(T)/n converges monotonically from above; bisection on
// g(delta) = delta - rhs(delta) over [0, tr(T)/n] is the fallback.
inline FixedPointSolution solve_delta_spectrum(const RVector& gram_eigs, Real rho, Real n_frames,
                                               Real tol = 1e-13,
                                               std::optional<SolveMethod> force = std::nullopt) {
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be >= 0");
  if (!(n_frames >= 1.0)) throw std::invalid_argument("n_frames must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  const Real top = gram_eigs.size() ? gram_eigs.maxCoeff() : 0.0;
  if (gram_eigs.size() && gram_eigs.minCoeff() < -1e-9 * std::max(top, 1e-300))
    throw std::invalid_argument("gram matrix must be PSD");
  RVector eigs = gram_eigs.cwiseMax(0.0);

  FixedPointSolution sol;
  sol.rho = rho;
  const Real trace = eigs.sum();
  const Real delta0 = trace / n_frames;
  if (trace <= 0.0) {
    sol.method = force.value_or(SolveMethod::fixed_point_iteration);
    return sol;  // T = 0: the equation collapses to delta = 0
  }

  auto residual_at = [&](Real d) { return d - detail::delta_rhs(eigs, rho, d, n_frames); };

  auto finish = [&](Real d, int iters, SolveMethod m) {
    sol.delta = d;
    sol.residual = std::abs(residual_at(d));
    sol.iterations = iters;
    sol.method = m;
    return sol;
  };

  if (force != SolveMethod::bisection) {
    Real delta = delta0;
    for (int it = 1; it <= 1000; ++it) {
      const Real next = detail::delta_rhs(eigs, rho, delta, n_frames);
      if (!std::isfinite(next)) throw NumericalError("fixed-point iteration produced NaN");
      const Real change = std::abs(next - delta);
      delta = next;
      if (change <= 0.5 * tol * std::max(1.0, delta)) {
        if (std::abs(residual_at(delta)) <= tol * std::max(1.0, delta))
          return finish(delta, it, SolveMethod::fixed_point_iteration);
      }
    }
    if (force == SolveMethod::fixed_point_iteration)
      return finish(delta, 1000, SolveMethod::fixed_point_iteration);
    // fall through to bisection
  }

  Real lo = 0.0, hi = delta0;
  if (std::abs(residual_at(hi)) <= tol * std::max(1.0, hi))
    return finish(hi, 0, SolveMethod::bisection);  // covers rho == 0 exactly
  int it = 0;
  Real mid = 0.5 * (lo + hi);
  for (; it < 2000 && hi - lo > 0.0; ++it) {
    mid = 0.5 * (lo + hi);
    const Real g = residual_at(mid);
    if (!std::isfinite(g)) throw NumericalError("bisection produced NaN");
    if (std::abs(g) <= tol * std::max(1.0, mid)) break;
    (g < 0.0 ? lo : hi) = mid;
  }
  return finish(mid, it, SolveMethod::bisection);
}

inline FixedPointSolution solve_delta(const CMatrix& gram, Real rho, Real n_frames,
                                      Real tol = 1e-13,
                                      std::optional<SolveMethod> force = std::nullopt) {
  if (!is_hermitian(gram, 1e-10)) throw std::invalid_argument("gram matrix must be Hermitian");
  return solve_delta_spectrum(hermitian_eigenvalues(gram), rho, n_frames, tol, force);
}

}  // namespace smi
