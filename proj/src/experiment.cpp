#include "smi/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <future>
#include <sstream>

#include "smi/matrix_io.hpp"
#include "smi/mc.hpp"

namespace smi {

namespace {

std::string fmt12(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Real unit_scale(const ExperimentConfig& c) { return c.run.units == "bits" ? 1.0 / M_LN2 : 1.0; }

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Precoder config_precoder(const ExperimentConfig& config, const CorrelationPair& corr,
                         const Scenario& scenario) {
  if (!config.run.precoder_in.empty()) {
    Precoder p{load_complex_matrix(config.run.precoder_in)};
    if (p.f.rows() != scenario.n_tx || p.f.cols() != scenario.n_targets)
      throw ConfigError("precoder file shape does not match the scenario");
    const Real budget = scenario.power_budget * (1.0 + 1e-9);
    if (p.f.squaredNorm() > budget) throw ConfigError("precoder exceeds the power budget");
    return p;
  }
  return make_initial_precoder(corr, scenario, InitScheme::eigenbeam, config.run.seed);
}

SweepRow evaluate_point(const CorrelationPair& corr, const Precoder& precoder,
                        const Scenario& scenario, Real sweep_value, int n_trials,
                        std::uint64_t mc_seed, bool timings) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRow row;
  row.sweep_value = sweep_value;
  row.smi_asymptotic = smi_asymptotic(corr, precoder, scenario).nats;
  row.smi_upper = smi_upper_bound(corr, precoder, scenario).nats;
  row.smi_lower = smi_lower_bound(corr, precoder, scenario).nats;
  const McReport mc = smi_monte_carlo(corr, precoder, scenario, n_trials, mc_seed);
  row.smi_mc_mean = mc.mean_nats;
  row.smi_mc_stderr = mc.std_error;
  const DofBounds dof = dof_bounds(scenario, precoder);
  row.dof_lower = dof.lower;
  row.dof_upper = dof.upper;
  if (timings) row.wall_time_ms = elapsed_ms(t0);
  return row;
}

OptimizerConfig optimizer_config(const ExperimentConfig& config, std::uint64_t seed) {
  OptimizerConfig oc;
  oc.max_iters = config.run.max_iters;
  oc.grad_norm_tol = config.run.grad_norm_tol;
  oc.objective = config.run.objective == "upper-bound-smi" ? Objective::upper_bound_smi
                                                           : Objective::asymptotic_smi;
  oc.init = config.run.init == "scaled-random" ? InitScheme::scaled_random : InitScheme::eigenbeam;
  oc.seed = seed;
  return oc;
}

std::vector<Real> grid_or_default(const ExperimentConfig& config, std::vector<Real> fallback) {
  return config.run.grid.empty() ? std::move(fallback) : config.run.grid;
}

Index as_count(Real v, const char* what) {
  const Index i = static_cast<Index>(v);
  if (static_cast<Real>(i) != v || i < 1) throw ConfigError(std::string(what) + " must be a positive integer");
  return i;
}

// Sweep points run concurrently; rows are joined back in grid order so the
// emitted CSV is independent of scheduling.
template <typename Fn>
std::string render_sweep(const std::vector<Real>& grid, bool with_arm, Fn&& point_rows) {
  std::vector<std::future<std::vector<std::string>>> futures;
  futures.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    futures.push_back(std::async(std::launch::async, point_rows, i, grid[i]));
  std::ostringstream out;
  out << sweep_csv_header(with_arm) << "\n";
  for (auto& fut : futures)
    for (const std::string& line : fut.get()) out << line << "\n";
  return out.str();
}

}  // namespace

std::string sweep_csv_header(bool with_arm) {
  std::string head =
      "sweep_value,smi_asymptotic,smi_upper,smi_lower,smi_mc_mean,smi_mc_stderr,"
      "dof_lower,dof_upper,wall_time_ms";
  return with_arm ? "arm," + head : head;
}

std::string sweep_csv_row(const SweepRow& row, const std::string& arm) {
  std::ostringstream out;
  if (!arm.empty()) out << arm << ",";
  out << fmt12(row.sweep_value) << "," << fmt12(row.smi_asymptotic) << ","
      << fmt12(row.smi_upper) << "," << fmt12(row.smi_lower) << "," << fmt12(row.smi_mc_mean)
      << "," << fmt12(row.smi_mc_stderr) << "," << row.dof_lower << "," << row.dof_upper << ","
      << fmt12(row.wall_time_ms);
  return out.str();
}

namespace {

SweepRow scaled(SweepRow row, Real scale) {
  row.smi_asymptotic *= scale;
  row.smi_upper *= scale;
  row.smi_lower *= scale;
  row.smi_mc_mean *= scale;
  row.smi_mc_stderr *= scale;
  return row;
}

}  // namespace

std::string run_eval(const ExperimentConfig& config) {
  validate_config(config);
  const Scenario scenario = config.scenario();
  const CorrelationPair corr = build_correlations(config.materialize_targets(), scenario);
  const Precoder precoder = config_precoder(config, corr, scenario);
  const SweepRow row =
      evaluate_point(corr, precoder, scenario, scenario.snr_db, config.run.n_trials,
                     derived_seed(config.run.seed, 0), config.run.timings);
  std::ostringstream out;
  out << sweep_csv_header() << "\n" << sweep_csv_row(scaled(row, unit_scale(config))) << "\n";
  return out.str();
}

std::string run_fig1(const ExperimentConfig& config) {
  validate_config(config);
  const std::vector<Real> grid = grid_or_default(config, {8, 16, 32, 64, 128});
  if (grid.empty()) throw ConfigError("frame-count grid is empty");
  for (Real g : grid)
    if (as_count(g, "n_frames grid value") < config.n_targets)
      throw ConfigError("frame-count grid must stay >= n_targets");

  const Scenario base = config.scenario();
  const CorrelationPair corr = build_correlations(config.materialize_targets(), base);
  const Precoder precoder = config_precoder(config, corr, base);
  const Real scale = unit_scale(config);

  return render_sweep(grid, false, [&](std::size_t i, Real value) {
    Scenario point = base;
    point.n_frames = static_cast<Index>(value);
    const SweepRow row = evaluate_point(corr, precoder, point, value, config.run.n_trials,
                                        derived_seed(config.run.seed, i), config.run.timings);
    return std::vector<std::string>{sweep_csv_row(scaled(row, scale))};
  });
}

std::string run_fig2(const ExperimentConfig& config) {
  validate_config(config);
  if (!config.targets.auto_generate)
    throw ConfigError("the target-count sweep regenerates targets and needs auto targets");
  std::vector<Real> fallback;
  for (Index k = 1; k <= config.n_frames && k <= 32; k *= 2) fallback.push_back(k);
  const std::vector<Real> grid = grid_or_default(config, std::move(fallback));
  for (Real g : grid)
    if (as_count(g, "target-count grid value") > config.n_frames)
      throw ConfigError("target-count grid must stay <= n_frames");
  const Real scale = unit_scale(config);

  return render_sweep(grid, false, [&](std::size_t i, Real value) {
    ExperimentConfig point_config = config;
    point_config.n_targets = static_cast<Index>(value);
    const Scenario point = point_config.scenario();
    const CorrelationPair corr = build_correlations(point_config.materialize_targets(), point);
    const Precoder precoder = config_precoder(point_config, corr, point);
    const SweepRow row = evaluate_point(corr, precoder, point, value, config.run.n_trials,
                                        derived_seed(config.run.seed, i), config.run.timings);
    return std::vector<std::string>{sweep_csv_row(scaled(row, scale))};
  });
}

std::string run_fig3(const ExperimentConfig& config) {
  validate_config(config);
  if (!config.targets.auto_generate)
    throw ConfigError("the SNR sweep rescales reflection variances and needs auto targets");
  const std::vector<Real> grid = grid_or_default(config, {0, 5, 10, 15, 20});
  const Real scale = unit_scale(config);

  return render_sweep(grid, true, [&](std::size_t i, Real snr_db) {
    ExperimentConfig point_config = config;
    point_config.snr_db = snr_db;
    const Scenario point = point_config.scenario();
    const CorrelationPair corr = build_correlations(point_config.materialize_targets(), point);

    OptimizerConfig oc = optimizer_config(point_config, derived_seed(config.run.seed, 2 * i));
    oc.objective = Objective::asymptotic_smi;
    const OptimizerTrace baseline = baseline_ub_precoder(corr, point, oc);
    // two starts for the proposed arm: the default init and the baseline
    // solution; ascent from the latter makes the head-to-head well ordered
    OptimizerTrace proposed = optimize_precoder(corr, point, oc);
    OptimizerTrace warmed = optimize_precoder(corr, point, oc, &baseline.final_precoder);
    if (warmed.final_objective > proposed.final_objective) proposed = std::move(warmed);

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> lines;
    const std::uint64_t mc_seed = derived_seed(config.run.seed, 2 * i + 1);
    SweepRow prop = evaluate_point(corr, proposed.final_precoder, point, snr_db,
                                   config.run.n_trials, mc_seed, false);
    SweepRow base = evaluate_point(corr, baseline.final_precoder, point, snr_db,
                                   config.run.n_trials, mc_seed, false);
    if (config.run.timings) {
      const Real ms = elapsed_ms(t0);
      prop.wall_time_ms = ms;
      base.wall_time_ms = ms;
    }
    lines.push_back(sweep_csv_row(scaled(prop, scale), "smi_oriented"));
    lines.push_back(sweep_csv_row(scaled(base, scale), "ub_oriented"));
    return lines;
  });
}

OptimizeResult run_optimize(const ExperimentConfig& config) {
  validate_config(config);
  const Scenario scenario = config.scenario();
  const CorrelationPair corr = build_correlations(config.materialize_targets(), scenario);
  const OptimizerTrace trace =
      optimize_precoder(corr, scenario, optimizer_config(config, config.run.seed));
  const Real scale = unit_scale(config);

  std::ostringstream out;
  out << "iter,objective,grad_norm,step,backtracks\n";
  for (const IterationRecord& rec : trace.records)
    out << rec.iter << "," << fmt12(rec.objective * scale) << "," << fmt12(rec.grad_norm) << ","
        << fmt12(rec.step) << "," << rec.backtracks << "\n";
  return {out.str(), trace.final_precoder.f};
}

}  // namespace smi
