#pragma once

#include <string>
#include <vector>

#include "smi/fixed_point.hpp"
#include "smi/model.hpp"

namespace smi {

enum class SmiMethod { asymptotic, upper_bound, lower_bound, monte_carlo, exact_realization };

// One SMI figure in nats, tagged with how it was obtained.
struct SmiEstimate {
  Real nats = 0.0;
  SmiMethod method = SmiMethod::asymptotic;
  Real std_error = 0.0;  // nonzero only for Monte-Carlo estimates
  std::string meta;
};

struct DofBounds {
  Index lower = 0;
  Index upper = 0;
};

// Ratio sequence n_frames * asymptotic / upper_bound along a noise sweep;
// `value` is the ratio at the smallest noise power.
struct DofEstimate {
  Real value = 0.0;
  std::vector<Real> ratios;
};

// ---- spectrum-domain cores -------------------------------------------------
// All cores work on the eigenvalues of T(F) and the receive loads
// lambda_j = eig_j(R_R) / sigma_N^2. n_frames enters as a real parameter,
// which keeps the analytic derivative in n_frames well defined.

// Jensen bound: sum_j log det(I + lambda_j T).
inline Real upper_bound_spectrum(const RVector& gram_eigs, const RVector& lambdas) {
  Real acc = 0.0;
  for (Index j = 0; j < lambdas.size(); ++j)
    if (lambdas[j] > 0.0) acc += logdet_id_plus(gram_eigs, lambdas[j]);
  return acc;
}

// Large-system value: per receive mode,
//   log det(I + lambda/(1+lambda*delta) T) + n*log(1+lambda*delta)
//   - n*lambda*delta/(1+lambda*delta),
// with delta the load-equation solution at rho = lambda. Zero modes are
// skipped; they contribute exactly nothing.
inline Real asymptotic_smi_spectrum(const RVector& gram_eigs, const RVector& lambdas,
                                    Real n_frames, Real tol = 1e-13) {
  Real acc = 0.0;
  for (Index j = 0; j < lambdas.size(); ++j) {
    const Real lambda = lambdas[j];
    if (!(lambda > 0.0)) continue;
    const FixedPointSolution sol = solve_delta_spectrum(gram_eigs, lambda, n_frames, tol);
    const Real x = lambda * sol.delta;
    acc += logdet_id_plus(gram_eigs, sol.alpha());
    acc += n_frames * (std::log1p(x) - x / (1.0 + x));
  }
  return acc;
}

// d/d(n_frames) of the asymptotic value: sum_j log(1+x_j) - x_j/(1+x_j),
// which is nonnegative term by term.
inline Real ns_derivative_spectrum(const RVector& gram_eigs, const RVector& lambdas,
                                   Real n_frames, Real tol = 1e-13) {
  Real acc = 0.0;
  for (Index j = 0; j < lambdas.size(); ++j) {
    const Real lambda = lambdas[j];
    if (!(lambda > 0.0)) continue;
    const FixedPointSolution sol = solve_delta_spectrum(gram_eigs, lambda, n_frames, tol);
    const Real x = lambda * sol.delta;
    acc += std::log1p(x) - x / (1.0 + x);
  }
  return acc;
}

// ---- precoder/scenario wrappers ---------------------------------------------

// rank(F F^H) at relative tolerance 1e-10 on the squared singular values.
inline Index precoder_rank(const Precoder& precoder) {
  if (precoder.f.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(precoder.f);
  const RVector sv = svd.singularValues();
  const Real top2 = sv.size() ? sv[0] * sv[0] : 0.0;
  if (top2 <= 0.0) return 0;
  return (sv.array().square() > 1e-10 * top2).count();
}

namespace detail {

inline void check_dims(const CorrelationPair& corr, const Precoder& precoder,
                       const Scenario& scenario) {
  validate_scenario(scenario);
  if (corr.r_tx.rows() != scenario.n_tx || corr.r_rx.rows() != scenario.n_rx)
    throw std::invalid_argument("correlation dimensions do not match the scenario");
  if (corr.n_targets != scenario.n_targets)
    throw std::invalid_argument("correlation target count does not match the scenario");
  if (precoder.f.rows() != scenario.n_tx ||
      precoder.f.cols() != scenario.n_targets)
    throw std::invalid_argument("precoder must be n_tx x n_targets");
}

}  // namespace detail

inline SmiEstimate smi_asymptotic(const CorrelationPair& corr, const Precoder& precoder,
                                  const Scenario& scenario) {
  detail::check_dims(corr, precoder, scenario);
  const RVector teigs = hermitian_eigenvalues(effective_gram(corr, precoder));
  const RVector lambdas = receive_eigenvalues(corr, scenario.noise_power);
  SmiEstimate est;
  est.nats = asymptotic_smi_spectrum(teigs, lambdas, static_cast<Real>(scenario.n_frames));
  est.method = SmiMethod::asymptotic;
  est.meta = scenario_digest(scenario);
  return est;
}

inline SmiEstimate smi_upper_bound(const CorrelationPair& corr, const Precoder& precoder,
                                   const Scenario& scenario) {
  detail::check_dims(corr, precoder, scenario);
  const RVector teigs = hermitian_eigenvalues(effective_gram(corr, precoder));
  const RVector lambdas = receive_eigenvalues(corr, scenario.noise_power);
  SmiEstimate est;
  est.nats = upper_bound_spectrum(teigs, lambdas);
  est.method = SmiMethod::upper_bound;
  est.meta = scenario_digest(scenario);
  return est;
}

// Scaled Jensen bound (n - min{K, rank(F F^H)}) / n of the upper bound.
inline SmiEstimate smi_lower_bound(const CorrelationPair& corr, const Precoder& precoder,
                                   const Scenario& scenario) {
  detail::check_dims(corr, precoder, scenario);
  if (scenario.n_frames < scenario.n_targets)
    throw std::invalid_argument("lower bound requires n_frames >= n_targets");
  const Index loss = std::min<Index>(scenario.n_targets, precoder_rank(precoder));
  const Real factor =
      static_cast<Real>(scenario.n_frames - loss) / static_cast<Real>(scenario.n_frames);
  SmiEstimate est = smi_upper_bound(corr, precoder, scenario);
  est.nats *= factor;
  est.method = SmiMethod::lower_bound;
  return est;
}

inline DofBounds dof_bounds(const Scenario& scenario, const Precoder& precoder) {
  validate_scenario(scenario);
  const Index loss = std::min<Index>(scenario.n_targets, precoder_rank(precoder));
  DofBounds b;
  b.lower = std::max<Index>(scenario.n_frames - loss, 0);
  b.upper = scenario.n_frames;
  return b;
}

// Effective observation count at vanishing noise: the sweep evaluates
// n_frames * asymptotic / upper_bound at each noise power and reports the
// value at the smallest one.
inline DofEstimate dof_estimate(const CorrelationPair& corr, const Precoder& precoder,
                                const Scenario& scenario, const std::vector<Real>& noise_sweep) {
  detail::check_dims(corr, precoder, scenario);
  if (noise_sweep.size() < 3)
    throw std::invalid_argument("noise sweep needs at least 3 points");
  for (std::size_t i = 0; i + 1 < noise_sweep.size(); ++i)
    if (!(noise_sweep[i] > noise_sweep[i + 1]))
      throw std::invalid_argument("noise sweep must be strictly decreasing");
  if (!(noise_sweep.back() > 0.0)) throw std::invalid_argument("noise powers must be > 0");

  const RVector teigs = hermitian_eigenvalues(effective_gram(corr, precoder));
  DofEstimate est;
  est.ratios.reserve(noise_sweep.size());
  for (Real noise : noise_sweep) {
    const RVector lambdas = receive_eigenvalues(corr, noise);
    const Real ub = upper_bound_spectrum(teigs, lambdas);
    if (!(ub > 0.0)) throw UndefinedDofError("sensing DoF undefined: zero upper bound");
    const Real asym = asymptotic_smi_spectrum(teigs, lambdas, static_cast<Real>(scenario.n_frames));
    est.ratios.push_back(static_cast<Real>(scenario.n_frames) * asym / ub);
  }
  est.value = est.ratios.back();
  return est;
}

inline Real smi_ns_derivative(const CorrelationPair& corr, const Precoder& precoder,
                              const Scenario& scenario) {
  detail::check_dims(corr, precoder, scenario);
  const RVector teigs = hermitian_eigenvalues(effective_gram(corr, precoder));
  const RVector lambdas = receive_eigenvalues(corr, scenario.noise_power);
  return ns_derivative_spectrum(teigs, lambdas, static_cast<Real>(scenario.n_frames));
}

}  // namespace smi
