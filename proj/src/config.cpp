#include "smi/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace smi {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

Real parse_real(const std::string& v, int line) {
  std::size_t pos = 0;
  Real out = 0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + v + "'", line);
  }
  if (pos != v.size()) throw ConfigError("trailing characters in number '" + v + "'", line);
  return out;
}

long long parse_int(const std::string& v, int line) {
  const Real r = parse_real(v, line);
  const long long i = static_cast<long long>(r);
  if (static_cast<Real>(i) != r) throw ConfigError("expected an integer, got '" + v + "'", line);
  return i;
}

std::uint64_t parse_u64(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const std::uint64_t out = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("expected an unsigned integer, got '" + v + "'", line);
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError("expected a boolean, got '" + v + "'", line);
}

std::vector<Real> parse_real_list(const std::string& v, int line) {
  std::string cleaned = v;
  for (char& c : cleaned)
    if (c == ',') c = ' ';
  std::istringstream in(cleaned);
  std::vector<Real> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_real(tok, line));
  return out;
}

std::string fmt_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Scenario ExperimentConfig::scenario() const {
  Scenario s;
  s.n_tx = n_tx;
  s.n_rx = n_rx;
  s.n_targets = n_targets;
  s.n_frames = n_frames;
  s.power_budget = dbm_to_watts(power_dbm);
  s.noise_power = dbm_to_watts(noise_dbm);
  s.snr_db = snr_db;
  s.carrier_hz = carrier_hz;
  return s;
}

TargetSet ExperimentConfig::materialize_targets() const {
  const Scenario s = scenario();
  if (targets.auto_generate)
    return random_targets(s, deg_to_rad(targets.angle_min_deg), deg_to_rad(targets.angle_max_deg),
                          targets.seed);
  if (static_cast<Index>(targets.explicit_targets.size()) != n_targets)
    throw ConfigError("explicit target count does not match n_targets");
  TargetSet out;
  out.reserve(targets.explicit_targets.size());
  for (const auto& t : targets.explicit_targets)
    out.push_back({deg_to_rad(t[0]), deg_to_rad(t[1]), t[2]});
  return out;
}

ExperimentConfig default_config(Profile profile) {
  ExperimentConfig c;
  if (profile == Profile::paper) {
    c.n_tx = 32;
    c.n_rx = 16;
    c.n_targets = 7;
    c.n_frames = 32;
    c.run.n_trials = 5000;
  }
  return c;
}

ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base) {
  std::istringstream in(text);
  std::string raw;
  std::string section;
  bool explicit_targets_seen = false;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty() || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "targets" && section != "run")
        throw ConfigError("unknown section [" + section + "]", line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError("key outside any section", line_no);

    if (section == "scenario") {
      if (key == "n_tx") base.n_tx = parse_int(value, line_no);
      else if (key == "n_rx") base.n_rx = parse_int(value, line_no);
      else if (key == "n_targets") base.n_targets = parse_int(value, line_no);
      else if (key == "n_frames") base.n_frames = parse_int(value, line_no);
      else if (key == "power_dbm") base.power_dbm = parse_real(value, line_no);
      else if (key == "noise_dbm") base.noise_dbm = parse_real(value, line_no);
      else if (key == "snr_db") base.snr_db = parse_real(value, line_no);
      else if (key == "carrier_hz") base.carrier_hz = parse_real(value, line_no);
      else throw ConfigError("unknown scenario key '" + key + "'", line_no);
    } else if (section == "targets") {
      if (key == "auto") base.targets.auto_generate = parse_bool(value, line_no);
      else if (key == "angle_min_deg") base.targets.angle_min_deg = parse_real(value, line_no);
      else if (key == "angle_max_deg") base.targets.angle_max_deg = parse_real(value, line_no);
      else if (key == "seed") base.targets.seed = parse_u64(value, line_no);
      else if (key == "target") {
        if (!explicit_targets_seen) {
          base.targets.explicit_targets.clear();  // replace, do not append to, the base list
          explicit_targets_seen = true;
        }
        const std::vector<Real> parts = parse_real_list(value, line_no);
        if (parts.size() != 3)
          throw ConfigError("target needs 'aod_deg aoa_deg reflect_var'", line_no);
        base.targets.explicit_targets.push_back({parts[0], parts[1], parts[2]});
      } else {
        throw ConfigError("unknown targets key '" + key + "'", line_no);
      }
    } else {  // run
      if (key == "grid") base.run.grid = parse_real_list(value, line_no);
      else if (key == "n_trials") base.run.n_trials = static_cast<int>(parse_int(value, line_no));
      else if (key == "seed") base.run.seed = parse_u64(value, line_no);
      else if (key == "out") base.run.out = value;
      else if (key == "units") base.run.units = value;
      else if (key == "precoder") base.run.precoder_in = value;
      else if (key == "precoder_out") base.run.precoder_out = value;
      else if (key == "timings") base.run.timings = parse_bool(value, line_no);
      else if (key == "max_iters") base.run.max_iters = static_cast<int>(parse_int(value, line_no));
      else if (key == "grad_norm_tol") base.run.grad_norm_tol = parse_real(value, line_no);
      else if (key == "objective") base.run.objective = value;
      else if (key == "init") base.run.init = value;
      else throw ConfigError("unknown run key '" + key + "'", line_no);
    }
  }
  return base;
}

ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "[scenario]\n";
  out << "n_tx = " << c.n_tx << "\n";
  out << "n_rx = " << c.n_rx << "\n";
  out << "n_targets = " << c.n_targets << "\n";
  out << "n_frames = " << c.n_frames << "\n";
  out << "power_dbm = " << fmt_real(c.power_dbm) << "\n";
  out << "noise_dbm = " << fmt_real(c.noise_dbm) << "\n";
  out << "snr_db = " << fmt_real(c.snr_db) << "\n";
  out << "carrier_hz = " << fmt_real(c.carrier_hz) << "\n";
  out << "\n[targets]\n";
  out << "auto = " << (c.targets.auto_generate ? "true" : "false") << "\n";
  out << "angle_min_deg = " << fmt_real(c.targets.angle_min_deg) << "\n";
  out << "angle_max_deg = " << fmt_real(c.targets.angle_max_deg) << "\n";
  out << "seed = " << c.targets.seed << "\n";
  for (const auto& t : c.targets.explicit_targets)
    out << "target = " << fmt_real(t[0]) << " " << fmt_real(t[1]) << " " << fmt_real(t[2]) << "\n";
  out << "\n[run]\n";
  if (!c.run.grid.empty()) {
    out << "grid =";
    for (Real g : c.run.grid) out << " " << fmt_real(g);
    out << "\n";
  }
  out << "n_trials = " << c.run.n_trials << "\n";
  out << "seed = " << c.run.seed << "\n";
  if (!c.run.out.empty()) out << "out = " << c.run.out << "\n";
  out << "units = " << c.run.units << "\n";
  if (!c.run.precoder_in.empty()) out << "precoder = " << c.run.precoder_in << "\n";
  out << "precoder_out = " << c.run.precoder_out << "\n";
  out << "timings = " << (c.run.timings ? "on" : "off") << "\n";
  out << "max_iters = " << c.run.max_iters << "\n";
  out << "grad_norm_tol = " << fmt_real(c.run.grad_norm_tol) << "\n";
  out << "objective = " << c.run.objective << "\n";
  out << "init = " << c.run.init << "\n";
  return out.str();
}

void validate_config(const ExperimentConfig& c) {
  if (c.n_tx < 1 || c.n_rx < 1 || c.n_targets < 1 || c.n_frames < 1)
    throw ConfigError("scenario dimensions must be positive");
  if (c.n_frames < c.n_targets) throw ConfigError("n_frames must be >= n_targets");
  if (!(c.targets.angle_min_deg <= c.targets.angle_max_deg))
    throw ConfigError("angle_min_deg must be <= angle_max_deg");
  if (!c.targets.auto_generate &&
      static_cast<Index>(c.targets.explicit_targets.size()) != c.n_targets)
    throw ConfigError("explicit target count does not match n_targets");
  for (std::size_t i = 0; i + 1 < c.run.grid.size(); ++i)
    if (!(c.run.grid[i] < c.run.grid[i + 1])) throw ConfigError("grid must be strictly ascending");
  if (c.run.n_trials < 2) throw ConfigError("n_trials must be >= 2");
  if (c.run.units != "nats" && c.run.units != "bits")
    throw ConfigError("units must be 'nats' or 'bits'");
  if (c.run.objective != "asymptotic-smi" && c.run.objective != "upper-bound-smi")
    throw ConfigError("objective must be 'asymptotic-smi' or 'upper-bound-smi'");
  if (c.run.init != "eigenbeam" && c.run.init != "scaled-random")
    throw ConfigError("init must be 'eigenbeam' or 'scaled-random'");
  if (c.run.max_iters < 0) throw ConfigError("max_iters must be >= 0");
  if (!(c.run.grad_norm_tol > 0.0)) throw ConfigError("grad_norm_tol must be > 0");
  if (!c.run.precoder_in.empty() && !std::filesystem::exists(c.run.precoder_in))
    throw ConfigError("precoder file does not exist: " + c.run.precoder_in);
}

}  // namespace smi
