#pragma once

#include <string>

#include "smi/config.hpp"
#include "smi/manifold.hpp"

namespace smi {

// One CSV line of a sweep: the swept value, all four SMI views, the DoF
// bracket, and the per-point wall time (0 unless timings are enabled).
struct SweepRow {
  Real sweep_value = 0.0;
  Real smi_asymptotic = 0.0;
  Real smi_upper = 0.0;
  Real smi_lower = 0.0;
  Real smi_mc_mean = 0.0;
  Real smi_mc_stderr = 0.0;
  Index dof_lower = 0;
  Index dof_upper = 0;
  Real wall_time_ms = 0.0;
};

std::string sweep_csv_header(bool with_arm = false);
std::string sweep_csv_row(const SweepRow& row, const std::string& arm = "");

// Single-point evaluation of the configured scenario (precoder from the
// config file, or the eigenbeam at full power).
std::string run_eval(const ExperimentConfig& config);

// SMI versus frame count at fixed targets and fixed precoder.
std::string run_fig1(const ExperimentConfig& config);

// SMI versus target count at fixed frame count (auto targets only).
std::string run_fig2(const ExperimentConfig& config);

// SMI versus SNR with two precoding arms: the asymptotic-SMI optimizer and
// the upper-bound baseline, both evaluated under every estimator.
std::string run_fig3(const ExperimentConfig& config);

struct OptimizeResult {
  std::string trace_csv;
  CMatrix final_precoder;
};

OptimizeResult run_optimize(const ExperimentConfig& config);

}  // namespace smi
