#pragma once

#include <functional>
#include <optional>

#include "smi/gradient.hpp"

namespace smi {

enum class Objective { asymptotic_smi, upper_bound_smi };
enum class InitScheme { scaled_random, eigenbeam };
enum class Termination { gradient_tolerance, max_iters, line_search_failure };

struct ArmijoParams {
  Real initial_step = 1.0;
  Real contraction = 0.5;
  Real sufficient_decrease = 1e-4;
  int max_backtracks = 40;
};

struct OptimizerConfig {
  int max_iters = 50;
  Real grad_norm_tol = 1e-5;
  ArmijoParams armijo;
  Objective objective = Objective::asymptotic_smi;
  InitScheme init = InitScheme::eigenbeam;
  std::uint64_t seed = 0;
};

struct IterationRecord {
  int iter = 0;
  Real objective = 0.0;
  Real grad_norm = 0.0;
  Real step = 0.0;
  int backtracks = 0;
};

struct OptimizerTrace {
  std::vector<IterationRecord> records;
  Precoder final_precoder;
  Termination reason = Termination::max_iters;
  Real final_objective = 0.0;
};

// Projection onto the tangent space of the power sphere ||F||^2 = P:
// removes the radial component (1/P) Re tr(F grad^H) F.
inline CMatrix riemannian_gradient(const CMatrix& f, const CMatrix& eucl_grad, Real power) {
  if (!(power > 0.0)) throw std::invalid_argument("power must be > 0");
  if (f.rows() != eucl_grad.rows() || f.cols() != eucl_grad.cols())
    throw std::invalid_argument("gradient shape must match the precoder");
  const Real norm2 = f.squaredNorm();
  if (std::abs(norm2 - power) > 1e-8 * power)
    throw std::invalid_argument("precoder is not on the power sphere");
  return eucl_grad - (real_inner(f, eucl_grad) / power) * f;
}

// Rescales F + D back onto the sphere; exact up to one multiplication per
// entry, so the result satisfies ||.||^2 = P to round-off.
inline CMatrix retract(const CMatrix& f, const CMatrix& tangent, Real power) {
  if (!(power > 0.0)) throw std::invalid_argument("power must be > 0");
  CMatrix moved = f + tangent;
  const Real norm = moved.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("retraction undefined at the origin");
  moved *= std::sqrt(power) / norm;
  return moved;
}

struct ArmijoResult {
  Real step = 0.0;
  CMatrix precoder;
  Real objective = 0.0;
  int evals = 0;
};

// Backtracking on the retracted ray: accepts the largest
// beta = initial * contraction^t with
// L(retract(F, beta D)) >= L(F) + c beta Re tr(D grad^H).
// Returns nullopt when max_backtracks contractions all fail.
inline std::optional<ArmijoResult> armijo_search(
    const std::function<Real(const CMatrix&)>& objective, const CMatrix& f, Real f_value,
    const CMatrix& direction, const CMatrix& riem_grad, const ArmijoParams& params, Real power) {
  const Real slope = real_inner(direction, riem_grad);
  if (!(slope > 0.0)) throw std::invalid_argument("armijo needs an ascent direction");
  Real beta = params.initial_step;
  for (int t = 0; t <= params.max_backtracks; ++t, beta *= params.contraction) {
    CMatrix candidate = retract(f, beta * direction, power);
    const Real value = objective(candidate);
    if (value >= f_value + params.sufficient_decrease * beta * slope)
      return ArmijoResult{beta, std::move(candidate), value, t + 1};
  }
  return std::nullopt;
}

// SMI objective bound to one correlation/scenario pair, with the receive
// loads and transmit square root precomputed.
class PrecoderObjective {
 public:
  PrecoderObjective(const CorrelationPair& corr, const Scenario& scenario, Objective kind)
      : r_tx_sqrt_(corr.r_tx_sqrt),
        lambdas_(receive_eigenvalues(corr, scenario.noise_power)),
        n_frames_(static_cast<Real>(scenario.n_frames)),
        kind_(kind) {}

  Real value(const CMatrix& f) const {
    const CMatrix w = r_tx_sqrt_ * f;
    CMatrix gram = w * w.adjoint();
    gram = 0.5 * (gram + gram.adjoint()).eval();
    const RVector teigs = hermitian_eigenvalues(gram);
    return kind_ == Objective::asymptotic_smi
               ? asymptotic_smi_spectrum(teigs, lambdas_, n_frames_)
               : upper_bound_spectrum(teigs, lambdas_);
  }

  CMatrix gradient(const CMatrix& f) const {
    const detail::GramBasis basis = detail::make_gram_basis(r_tx_sqrt_, f);
    CMatrix grad = CMatrix::Zero(f.rows(), f.cols());
    for (Index j = 0; j < lambdas_.size(); ++j) {
      const Real lambda = lambdas_[j];
      if (!(lambda > 0.0)) continue;
      if (kind_ == Objective::asymptotic_smi) {
        const FixedPointSolution sol = solve_delta_spectrum(basis.values, lambda, n_frames_);
        grad += detail::mode_gradient_core(basis, lambda, sol.delta, n_frames_);
      } else {
        const RVector minv = (1.0 + lambda * basis.values.array()).inverse().matrix();
        grad += lambda * (basis.left * minv.asDiagonal() * basis.right);
      }
    }
    return grad;
  }

  std::function<Real(const CMatrix&)> as_function() const {
    return [this](const CMatrix& f) { return value(f); };
  }

 private:
  CMatrix r_tx_sqrt_;
  RVector lambdas_;
  Real n_frames_;
  Objective kind_;
};

// Deterministic starting point. `eigenbeam` spreads the budget over the
// leading eigenvectors of R_T (cycling when more columns than eigenvectors
// are needed); `scaled_random` normalizes a seeded Gaussian draw.
inline Precoder make_initial_precoder(const CorrelationPair& corr, const Scenario& scenario,
                                      InitScheme scheme, std::uint64_t seed) {
  validate_scenario(scenario);
  const Index n_tx = scenario.n_tx;
  const Index k = scenario.n_targets;
  Precoder p;
  if (scheme == InitScheme::scaled_random) {
    Rng rng(seed);
    CMatrix g = complex_gaussian(n_tx, k, M_SQRT1_2, rng);
    p.f = g * (std::sqrt(scenario.power_budget) / g.norm());
    return p;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(corr.r_tx);
  if (es.info() != Eigen::Success) throw NumericalError("transmit eigendecomposition failed");
  const Real col_scale = std::sqrt(scenario.power_budget / static_cast<Real>(k));
  p.f = CMatrix(n_tx, k);
  for (Index c = 0; c < k; ++c) {
    const Index pick = n_tx - 1 - (c % n_tx);  // eigenvalues ascend; walk from the top
    p.f.col(c) = col_scale * es.eigenvectors().col(pick);
  }
  // cycling reuses eigenvectors, so renormalize the total budget exactly
  p.f *= std::sqrt(scenario.power_budget) / p.f.norm();
  return p;
}

// Riemannian steepest ascent with Armijo backtracking on the power sphere.
// Row m of the trace describes iterate m and the step taken from it; the
// final row carries step 0.
inline OptimizerTrace optimize_precoder(const CorrelationPair& corr, const Scenario& scenario,
                                        const OptimizerConfig& config,
                                        const Precoder* start = nullptr) {
  detail::check_dims(corr, start ? *start : Precoder{CMatrix::Zero(scenario.n_tx,
                                                                   scenario.n_targets)},
                     scenario);
  const Real power = scenario.power_budget;
  PrecoderObjective objective(corr, scenario, config.objective);
  const auto objective_fn = objective.as_function();

  CMatrix f = start ? start->f : make_initial_precoder(corr, scenario, config.init,
                                                       config.seed).f;
  if (!(f.norm() > 0.0)) throw std::invalid_argument("initial precoder must be nonzero");
  f *= std::sqrt(power) / f.norm();  // land exactly on the sphere
  Real value = objective.value(f);

  OptimizerTrace trace;
  trace.reason = Termination::max_iters;
  for (int m = 0; m <= config.max_iters; ++m) {
    const CMatrix riem = riemannian_gradient(f, objective.gradient(f), power);
    const Real grad_norm = riem.norm();
    trace.records.push_back({m, value, grad_norm, 0.0, 0});
    if (grad_norm <= config.grad_norm_tol) {
      trace.reason = Termination::gradient_tolerance;
      break;
    }
    if (m == config.max_iters) {
      trace.reason = Termination::max_iters;
      break;
    }
    const auto step = armijo_search(objective_fn, f, value, riem, riem, config.armijo, power);
    if (!step) {
      trace.reason = Termination::line_search_failure;
      break;
    }
    trace.records.back().step = step->step;
    trace.records.back().backtracks = step->evals - 1;
    f = step->precoder;
    value = step->objective;
  }
  trace.final_precoder.f = std::move(f);
  trace.final_objective = value;
  return trace;
}

// Comparison arm: identical machinery maximizing the Jensen bound.
inline OptimizerTrace baseline_ub_precoder(const CorrelationPair& corr, const Scenario& scenario,
                                           const OptimizerConfig& config) {
  OptimizerConfig ub_config = config;
  ub_config.objective = Objective::upper_bound_smi;
  return optimize_precoder(corr, scenario, ub_config);
}

}  // namespace smi
