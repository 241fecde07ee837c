#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "smi/model.hpp"

namespace smi {

// Configuration error with the offending 1-based line (0 when not tied to
// one line).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what, int line_no = 0)
      : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what : what),
        line(line_no) {}
  int line = 0;
};

enum class Profile { desk, paper };

struct TargetsConfig {
  bool auto_generate = true;
  Real angle_min_deg = 30.0;
  Real angle_max_deg = 60.0;
  std::uint64_t seed = 7;
  // aod_deg, aoa_deg, reflect_var; used when auto_generate is false
  std::vector<std::array<Real, 3>> explicit_targets;
};

struct RunConfig {
  std::vector<Real> grid;  // per-command sweep values; command default when empty
  int n_trials = 500;
  std::uint64_t seed = 1;
  std::string out;  // CSV destination; empty means stdout
  std::string units = "nats";
  std::string precoder_in;  // optional precoder file for eval
  std::string precoder_out = "final_precoder.txt";
  bool timings = false;  // off by default so CSV output is byte-stable
  int max_iters = 50;
  Real grad_norm_tol = 1e-5;
  std::string objective = "asymptotic-smi";
  std::string init = "eigenbeam";
};

// Resolved experiment description. Power levels are carried in dBm/dB as
// configured; scenario() converts to linear units.
struct ExperimentConfig {
  Index n_tx = 8;
  Index n_rx = 4;
  Index n_targets = 3;
  Index n_frames = 16;
  Real power_dbm = 30.0;
  Real noise_dbm = -90.0;
  Real snr_db = 20.0;
  Real carrier_hz = 28e9;
  TargetsConfig targets;
  RunConfig run;

  Scenario scenario() const;
  TargetSet materialize_targets() const;
};

ExperimentConfig default_config(Profile profile);

// Parses the sectioned key-value format ([scenario]/[targets]/[run]) over a
// base configuration; unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base);
ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base);

// Canonical text form; parsing it back reproduces the same configuration.
std::string serialize_config(const ExperimentConfig& config);

// Cross-field checks shared by every command (file existence, grid order,
// enums). Command-specific grid constraints live with the commands.
void validate_config(const ExperimentConfig& config);

}  // namespace smi
