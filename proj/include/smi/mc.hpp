#pragma once

#include <cstdint>

#include "smi/rmt.hpp"
#include "smi/rng.hpp"

namespace smi {

// K x n_frames signal with i.i.d. complex Gaussian entries of variance
// 1/n_frames, so E[S S^H] = I.
struct RandomSignal {
  CMatrix s;
  std::uint64_t seed = 0;
};

enum class DetPath { eigen_sum, kron_direct };

struct McReport {
  Real mean_nats = 0.0;
  Real std_error = 0.0;
  int n_trials = 0;
  std::uint64_t seed = 0;
  DetPath per_trial_path = DetPath::eigen_sum;
};

inline RandomSignal sample_signal(Index k, Index n_frames, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("signal needs k >= 1");
  if (n_frames < k) throw std::invalid_argument("signal needs n_frames >= k");
  Rng rng(seed);
  RandomSignal sig;
  sig.s = complex_gaussian(k, n_frames, std::sqrt(0.5 / static_cast<Real>(n_frames)), rng);
  sig.seed = seed;
  return sig;
}

namespace detail {

// log det(I + sum over receive modes) from the coded block R_T^{1/2} F S.
// Cost is one n_tx-sized eigensolve regardless of n_rx.
inline Real realization_eigen_sum(const CMatrix& coded, const RVector& lambdas) {
  CMatrix gram = coded * coded.adjoint();
  gram = 0.5 * (gram + gram.adjoint()).eval();
  const RVector geigs = hermitian_eigenvalues(gram);
  Real acc = 0.0;
  for (Index j = 0; j < lambdas.size(); ++j)
    if (lambdas[j] > 0.0) acc += logdet_id_plus(geigs, lambdas[j]);
  if (!std::isfinite(acc)) throw NumericalError("non-finite log-determinant in realization");
  return acc;
}

}  // namespace detail

// Exact per-realization value log det(I + (R_R/sigma^2) (x) W) with
// W = R_T^{1/2} F S S^H F^H R_T^{1/2}. The Kronecker path materializes the
// full product and exists as a small-instance cross-check only.
inline Real smi_realization(const CorrelationPair& corr, const Precoder& precoder,
                            const RandomSignal& signal, const Scenario& scenario,
                            DetPath path = DetPath::eigen_sum) {
  detail::check_dims(corr, precoder, scenario);
  if (signal.s.rows() != scenario.n_targets || signal.s.cols() != scenario.n_frames)
    throw std::invalid_argument("signal must be n_targets x n_frames");
  const CMatrix coded = corr.r_tx_sqrt * precoder.f * signal.s;
  if (path == DetPath::eigen_sum) {
    const RVector lambdas = receive_eigenvalues(corr, scenario.noise_power);
    return detail::realization_eigen_sum(coded, lambdas);
  }
  if (scenario.n_tx * scenario.n_rx > 64)
    throw std::invalid_argument("kron-direct path is gated to n_tx * n_rx <= 64");
  CMatrix w = coded * coded.adjoint();
  w = 0.5 * (w + w.adjoint()).eval();
  const CMatrix big = kronecker(corr.r_rx / scenario.noise_power, w);
  const Real value = logdet_id_plus_hermitian(big);
  if (!std::isfinite(value)) throw NumericalError("non-finite log-determinant in realization");
  return value;
}

// Seeded i.i.d. trials; trial i uses the derived stream (seed, i), so the
// report depends only on (seed, n_trials), never on evaluation order.
inline McReport smi_monte_carlo(const CorrelationPair& corr, const Precoder& precoder,
                                const Scenario& scenario, int n_trials, std::uint64_t seed) {
  detail::check_dims(corr, precoder, scenario);
  if (n_trials < 2) throw std::invalid_argument("monte carlo needs n_trials >= 2");
  const RVector lambdas = receive_eigenvalues(corr, scenario.noise_power);
  const CMatrix rf = corr.r_tx_sqrt * precoder.f;

  std::vector<Real> values(static_cast<std::size_t>(n_trials));
  for (int i = 0; i < n_trials; ++i) {
    const RandomSignal sig = sample_signal(scenario.n_targets, scenario.n_frames,
                                           derived_seed(seed, static_cast<std::uint64_t>(i)));
    values[static_cast<std::size_t>(i)] = detail::realization_eigen_sum(rf * sig.s, lambdas);
  }

  Real mean = 0.0;
  for (Real v : values) mean += v;
  mean /= static_cast<Real>(n_trials);
  Real ss = 0.0;
  for (Real v : values) ss += (v - mean) * (v - mean);
  const Real sample_var = ss / static_cast<Real>(n_trials - 1);

  McReport report;
  report.mean_nats = mean;
  report.std_error = std::sqrt(sample_var / static_cast<Real>(n_trials));
  report.n_trials = n_trials;
  report.seed = seed;
  report.per_trial_path = DetPath::eigen_sum;
  return report;
}

}  // namespace smi
