#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "smi/linalg.hpp"
#include "smi/rng.hpp"
#include "smi/types.hpp"
#include "smi/units.hpp"

namespace smi {

// One sensing setup: array sizes, frame count, and powers in linear watts.
struct Scenario {
  Index n_tx = 0;        // transmit antennas
  Index n_rx = 0;        // receive antennas
  Index n_targets = 0;   // K
  Index n_frames = 0;    // N_S, frames per coherent processing interval
  Real noise_power = 0;  // sigma_N^2, watts
  Real power_budget = 0; // P, squared-Frobenius budget for the precoder
  Real carrier_hz = 28e9;  // bookkeeping only
  Real snr_db = 20.0;      // SNR = P * sigma_k^2 / sigma_N^2
};

inline void validate_scenario(const Scenario& s) {
  if (s.n_tx < 1 || s.n_rx < 1 || s.n_targets < 1 || s.n_frames < 1)
    throw std::invalid_argument("scenario dimensions must be positive");
  if (s.n_frames < s.n_targets)
    throw std::invalid_argument("scenario requires n_frames >= n_targets");
  if (!(s.noise_power > 0.0) || !(s.power_budget > 0.0))
    throw std::invalid_argument("scenario powers must be strictly positive");
  if (!(s.carrier_hz > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
}

inline std::string scenario_digest(const Scenario& s) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "nt%lld-nr%lld-k%lld-ns%lld-snr%g",
                static_cast<long long>(s.n_tx), static_cast<long long>(s.n_rx),
                static_cast<long long>(s.n_targets), static_cast<long long>(s.n_frames),
                s.snr_db);
  return buf;
}

// Per-target departure/arrival angles (radians) and reflection variance.
struct Target {
  Real aod = 0.0;
  Real aoa = 0.0;
  Real reflect_var = 0.0;  // sigma_k^2 of the complex reflection coefficient
};

using TargetSet = std::vector<Target>;

inline void validate_targets(const TargetSet& targets) {
  if (targets.empty()) throw std::invalid_argument("target set must contain at least one target");
  for (const Target& t : targets) {
    if (!std::isfinite(t.aod) || !std::isfinite(t.aoa))
      throw std::invalid_argument("target angles must be finite");
    if (!(t.reflect_var >= 0.0))
      throw std::invalid_argument("target reflection variance must be >= 0");
  }
}

// Transmit/receive correlation matrices plus the cached PSD square root of
// the transmit side. Both factors have rank at most n_targets.
struct CorrelationPair {
  CMatrix r_tx;
  CMatrix r_rx;
  CMatrix r_tx_sqrt;
  Index n_targets = 0;
};

struct Precoder {
  CMatrix f;  // n_tx x n_targets
};

struct TargetResponse {
  CMatrix h_matrix;  // n_rx x n_tx
  CVector h_vec;     // vec of h_matrix^H, length n_tx * n_rx
};

// Half-wavelength uniform linear array response; element m carries phase
// pi * m * sin(angle), so every entry has unit modulus.
inline CVector steering_vector(Index n_antennas, Real angle) {
  if (n_antennas < 1) throw std::invalid_argument("steering vector needs n_antennas >= 1");
  if (!std::isfinite(angle)) throw std::invalid_argument("steering angle must be finite");
  CVector v(n_antennas);
  const Real s = std::sin(angle);
  for (Index m = 0; m < n_antennas; ++m) {
    const Real phase = M_PI * static_cast<Real>(m) * s;
    v[m] = Complex(std::cos(phase), std::sin(phase));
  }
  return v;
}

// Validates Hermitian PSD structure and the rank-<=K model before caching
// the transmit square root.
inline CorrelationPair make_correlation_pair(CMatrix r_tx, CMatrix r_rx, Index n_targets) {
  if (n_targets < 1) throw std::invalid_argument("correlation pair needs n_targets >= 1");
  if (r_tx.rows() != r_tx.cols() || r_rx.rows() != r_rx.cols())
    throw std::invalid_argument("correlation matrices must be square");
  if (!is_hermitian(r_tx, 1e-12) || !is_hermitian(r_rx, 1e-12))
    throw std::invalid_argument("correlation matrices must be Hermitian within 1e-12");
  r_tx = 0.5 * (r_tx + r_tx.adjoint()).eval();
  r_rx = 0.5 * (r_rx + r_rx.adjoint()).eval();

  for (const CMatrix* m : {&r_tx, &r_rx}) {
    const RVector eigs = hermitian_eigenvalues(*m);
    const Real top = std::max(eigs.size() ? eigs[0] : 0.0, 0.0);
    if (eigs.size() && eigs[eigs.size() - 1] < -1e-10 * std::max(top, 1e-300))
      throw std::invalid_argument("correlation matrix is not PSD");
    if (spectrum_rank(eigs) > n_targets)
      throw std::invalid_argument("correlation matrix rank exceeds the target count");
  }

  CorrelationPair pair;
  pair.r_tx_sqrt = hermitian_sqrt(r_tx);
  const Real sq_err = max_abs(pair.r_tx_sqrt * pair.r_tx_sqrt - r_tx);
  if (sq_err > 1e-10 * std::max(max_abs(r_tx), 1e-300))
    throw NumericalError("square root of the transmit correlation did not verify");
  pair.r_tx = std::move(r_tx);
  pair.r_rx = std::move(r_rx);
  pair.n_targets = n_targets;
  return pair;
}

// R_T = sum_k a(aod_k) a^H(aod_k), R_R = sum_k sigma_k^2 b(aoa_k) b^H(aoa_k).
// The reflection variances live entirely on the receive factor.
inline CorrelationPair build_correlations(const TargetSet& targets, const Scenario& scenario) {
  validate_scenario(scenario);
  validate_targets(targets);
  if (static_cast<Index>(targets.size()) != scenario.n_targets)
    throw std::invalid_argument("target count does not match the scenario");
  CMatrix r_tx = CMatrix::Zero(scenario.n_tx, scenario.n_tx);
  CMatrix r_rx = CMatrix::Zero(scenario.n_rx, scenario.n_rx);
  for (const Target& t : targets) {
    const CVector a = steering_vector(scenario.n_tx, t.aod);
    const CVector b = steering_vector(scenario.n_rx, t.aoa);
    r_tx.noalias() += a * a.adjoint();
    r_rx.noalias() += t.reflect_var * (b * b.adjoint());
  }
  return make_correlation_pair(std::move(r_tx), std::move(r_rx), scenario.n_targets);
}

// Draws independent reflection coefficients and superposes the rank-one
// target responses. Deterministic for a given seed.
inline TargetResponse sample_target_response(const TargetSet& targets, const Scenario& scenario,
                                             std::uint64_t seed) {
  validate_scenario(scenario);
  validate_targets(targets);
  Rng rng(seed);
  CMatrix h = CMatrix::Zero(scenario.n_rx, scenario.n_tx);
  for (const Target& t : targets) {
    const Complex eps = rng.cnormal(std::sqrt(t.reflect_var / 2.0));
    const CVector a = steering_vector(scenario.n_tx, t.aod);
    const CVector b = steering_vector(scenario.n_rx, t.aoa);
    h.noalias() += eps * (b * a.adjoint());
  }
  TargetResponse resp;
  resp.h_vec = vec(CMatrix(h.adjoint()));
  resp.h_matrix = std::move(h);
  return resp;
}

// The n_targets largest eigenvalues of r_rx / noise_power, descending.
// Modes below the rank tolerance are returned as exact zeros; more than
// n_targets significant modes violate the rank-<=K model.
inline RVector receive_eigenvalues(const CorrelationPair& corr, Real noise_power) {
  if (!(noise_power > 0.0)) throw std::invalid_argument("noise power must be > 0");
  const RVector eigs = hermitian_eigenvalues(corr.r_rx);
  const Index k = corr.n_targets;
  if (spectrum_rank(eigs) > k)
    throw NumericalError("receive correlation has more significant modes than targets");
  const Real top = eigs.size() ? std::max(eigs[0], 0.0) : 0.0;
  RVector out = RVector::Zero(k);
  for (Index j = 0; j < k && j < eigs.size(); ++j)
    out[j] = (eigs[j] > 1e-10 * top) ? eigs[j] / noise_power : 0.0;
  return out;
}

// T(F) = R_T^{1/2} F F^H R_T^{1/2}, symmetrized against round-off.
inline CMatrix effective_gram(const CorrelationPair& corr, const Precoder& precoder) {
  if (precoder.f.rows() != corr.r_tx_sqrt.cols())
    throw std::invalid_argument("precoder rows must match the transmit dimension");
  const CMatrix w = corr.r_tx_sqrt * precoder.f;
  CMatrix t = w * w.adjoint();
  t = 0.5 * (t + t.adjoint()).eval();
  return t;
}

// Uniform per-target reflection variance realizing the configured SNR.
inline Real reflect_var_for_snr(const Scenario& s) {
  return db_to_linear(s.snr_db) * s.noise_power / s.power_budget;
}

// Angles drawn uniformly from [angle_min, angle_max] (radians); reflection
// variances set from the scenario SNR.
inline TargetSet random_targets(const Scenario& scenario, Real angle_min, Real angle_max,
                                std::uint64_t seed) {
  validate_scenario(scenario);
  Rng rng(seed);
  const Real var = reflect_var_for_snr(scenario);
  TargetSet targets(scenario.n_targets);
  for (Target& t : targets) {
    t.aod = rng.uniform(angle_min, angle_max);
    t.aoa = rng.uniform(angle_min, angle_max);
    t.reflect_var = var;
  }
  return targets;
}

}  // namespace smi
