// Command-line runner for sensing-MI experiments: single-point evaluation,
// the three sweep commands, and the precoder optimizer. All output is CSV
// and byte-stable under a fixed seed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "smi/experiment.hpp"
#include "smi/matrix_io.hpp"

namespace {

namespace fs = std::filesystem;

// Relative output paths honor the SMI_OUT_DIR override.
std::string resolve_out(const std::string& path) {
  if (path.empty()) return path;
  const char* dir = std::getenv("SMI_OUT_DIR");
  if (dir == nullptr || *dir == '\0' || fs::path(path).is_absolute()) return path;
  return (fs::path(dir) / path).string();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  const fs::path p = resolve_out(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot open output file: " + p.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

struct CliOptions {
  std::string config_path;
  std::string profile = "desk";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> units;
};

smi::ExperimentConfig load_config(const CliOptions& opts) {
  const smi::Profile profile =
      opts.profile == "paper" ? smi::Profile::paper : smi::Profile::desk;
  smi::ExperimentConfig config =
      smi::parse_config_file(opts.config_path, smi::default_config(profile));
  if (opts.seed) config.run.seed = *opts.seed;
  if (opts.out) config.run.out = *opts.out;
  if (opts.units) config.run.units = *opts.units;
  smi::validate_config(config);
  return config;
}

void add_common(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--profile", opts.profile, "scenario defaults before the config is applied")
      ->check(CLI::IsMember({"desk", "paper"}));
  cmd->add_option("--seed", opts.seed, "override the run seed");
  cmd->add_option("--out", opts.out, "override the output path (default: stdout)");
  cmd->add_option("--units", opts.units, "MI units in the output")
      ->check(CLI::IsMember({"nats", "bits"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sensing mutual information with random signals: evaluation, sweeps, precoding"};
  app.require_subcommand(1);

  CliOptions opts;
  CLI::App* eval = app.add_subcommand("eval", "evaluate one configured scenario");
  CLI::App* fig1 = app.add_subcommand("fig1", "sweep the frame count");
  CLI::App* fig2 = app.add_subcommand("fig2", "sweep the target count");
  CLI::App* fig3 = app.add_subcommand("fig3", "sweep SNR with both precoding arms");
  CLI::App* optimize = app.add_subcommand("optimize", "run the precoder optimizer");
  for (CLI::App* cmd : {eval, fig1, fig2, fig3, optimize}) add_common(cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const smi::ExperimentConfig config = load_config(opts);
    if (eval->parsed()) {
      write_text(config.run.out, smi::run_eval(config));
    } else if (fig1->parsed()) {
      write_text(config.run.out, smi::run_fig1(config));
    } else if (fig2->parsed()) {
      write_text(config.run.out, smi::run_fig2(config));
    } else if (fig3->parsed()) {
      write_text(config.run.out, smi::run_fig3(config));
    } else {
      const smi::OptimizeResult result = smi::run_optimize(config);
      write_text(config.run.out, result.trace_csv);
      smi::save_complex_matrix(resolve_out(config.run.precoder_out), result.final_precoder);
    }
  } catch (const smi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
