#include "cacc/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cacc/errors.hpp"

namespace cacc {

namespace {

std::string trimmed(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

// Parsed INI contents plus consumption tracking, so any key the loader
// never asked for is reported as unknown.
class IniReader {
 public:
  IniReader(std::string path, std::map<std::string, std::map<std::string, Entry>> data)
      : path_(std::move(path)), data_(std::move(data)) {}

  std::optional<std::string> take(const std::string& section,
                                  const std::string& key) {
    auto sect = data_.find(section);
    if (sect == data_.end()) return std::nullopt;
    auto entry = sect->second.find(key);
    if (entry == sect->second.end()) return std::nullopt;
    consumed_.insert(section + "." + key);
    last_line_ = entry->second.line;
    return entry->second.value;
  }

  double take_double(const std::string& section, const std::string& key,
                     double fallback) {
    const auto raw = take(section, key);
    if (!raw) return fallback;
    return parse_double(section, key, *raw);
  }

  std::optional<double> take_optional_double(const std::string& section,
                                             const std::string& key) {
    const auto raw = take(section, key);
    if (!raw) return std::nullopt;
    return parse_double(section, key, *raw);
  }

  int take_int(const std::string& section, const std::string& key,
               int fallback) {
    const auto raw = take(section, key);
    if (!raw) return fallback;
    try {
      std::size_t used = 0;
      const int value = std::stoi(*raw, &used);
      if (used != raw->size()) throw std::invalid_argument("trailing text");
      return value;
    } catch (const std::exception&) {
      throw bad_value(section, key, *raw);
    }
  }

  std::uint64_t take_uint64(const std::string& section, const std::string& key,
                            std::uint64_t fallback) {
    const auto raw = take(section, key);
    if (!raw) return fallback;
    try {
      std::size_t used = 0;
      const std::uint64_t value = std::stoull(*raw, &used);
      if (used != raw->size()) throw std::invalid_argument("trailing text");
      return value;
    } catch (const std::exception&) {
      throw bad_value(section, key, *raw);
    }
  }

  std::string take_string(const std::string& section, const std::string& key,
                          std::string fallback) {
    const auto raw = take(section, key);
    return raw ? *raw : std::move(fallback);
  }

  ConfigError bad_value(const std::string& section, const std::string& key,
                        const std::string& raw) const {
    return ConfigError(path_ + ":" + std::to_string(last_line_) +
                       ": invalid value '" + raw + "' for " + section + "." +
                       key);
  }

  void reject_unconsumed() const {
    for (const auto& [section, entries] : data_) {
      for (const auto& [key, entry] : entries) {
        if (!consumed_.count(section + "." + key)) {
          throw ConfigError(path_ + ":" + std::to_string(entry.line) +
                            ": unknown key '" + section + "." + key + "'");
        }
      }
    }
  }

 private:
  double parse_double(const std::string& section, const std::string& key,
                      const std::string& raw) {
    try {
      std::size_t used = 0;
      const double value = std::stod(raw, &used);
      if (used != raw.size() || !std::isfinite(value)) {
        throw std::invalid_argument("not a finite number");
      }
      return value;
    } catch (const std::exception&) {
      throw bad_value(section, key, raw);
    }
  }

  std::string path_;
  std::map<std::string, std::map<std::string, Entry>> data_;
  std::set<std::string> consumed_;
  int last_line_ = 0;
};

IniReader parse_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path + ": cannot open config file");
  }
  std::map<std::string, std::map<std::string, Entry>> data;
  std::string section;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trimmed(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": malformed section header");
      }
      section = trimmed(line.substr(1, line.size() - 2));
      data.try_emplace(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 'key = value'");
    }
    if (section.empty()) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": key outside any [section]");
    }
    const std::string key = trimmed(line.substr(0, eq));
    const std::string value = trimmed(line.substr(eq + 1));
    if (key.empty()) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": empty key");
    }
    auto [it, inserted] = data[section].try_emplace(key, Entry{value, line_no});
    if (!inserted) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": duplicate key '" + section + "." + key + "'");
    }
  }
  return IniReader(path, std::move(data));
}

Scheme parse_scheme(IniReader& ini, const std::string& section,
                    const std::string& key, Scheme fallback) {
  const auto raw = ini.take(section, key);
  if (!raw) return fallback;
  if (*raw == "dift") return Scheme::Dift;
  if (*raw == "fift") return Scheme::Fift;
  throw ini.bad_value(section, key, *raw);
}

Integrator parse_integrator(IniReader& ini, const std::string& section,
                            const std::string& key, Integrator fallback) {
  const auto raw = ini.take(section, key);
  if (!raw) return fallback;
  if (*raw == "zoh") return Integrator::Zoh;
  if (*raw == "euler") return Integrator::Euler;
  throw ini.bad_value(section, key, *raw);
}

LinkModelKind parse_link_kind(IniReader& ini, const std::string& section,
                              const std::string& key, LinkModelKind fallback) {
  const auto raw = ini.take(section, key);
  if (!raw) return fallback;
  if (*raw == "distance_logistic") return LinkModelKind::DistanceLogistic;
  if (*raw == "bernoulli_fixed") return LinkModelKind::BernoulliFixed;
  throw ini.bad_value(section, key, *raw);
}

void read_gains(IniReader& ini, const std::string& section,
                ControllerGains& row) {
  row.omega_k = ini.take_double(section, "omega_k", row.omega_k);
  row.h_d = ini.take_double(section, "h_d", row.h_d);
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  IniReader ini = parse_ini(path);
  RunConfig cfg;
  PlatoonConfig& p = cfg.platoon;

  p.n_followers = ini.take_int("platoon", "n_followers", p.n_followers);
  p.T = ini.take_double("platoon", "time_step", p.T);
  p.L = ini.take_double("platoon", "standstill_gap", p.L);
  p.v0 = ini.take_double("platoon", "initial_speed", p.v0);
  p.scheme = parse_scheme(ini, "platoon", "scheme", p.scheme);
  p.seed = ini.take_uint64("platoon", "seed", p.seed);
  p.duration = ini.take_double("platoon", "duration", p.duration);
  p.integrator = parse_integrator(ini, "platoon", "integrator", p.integrator);

  read_gains(ini, "gains.cacc1", p.gains.cacc1);
  read_gains(ini, "gains.cacc2", p.gains.cacc2);
  read_gains(ini, "gains.cacc3", p.gains.cacc3);
  read_gains(ini, "gains.acc", p.gains.acc);

  p.link.kind = parse_link_kind(ini, "link", "model", p.link.kind);
  p.link.p_max = ini.take_double("link", "p_max", p.link.p_max);
  p.link.d_half = ini.take_double("link", "d_half", p.link.d_half);
  p.link.steepness = ini.take_double("link", "steepness", p.link.steepness);

  cfg.trajectory = ini.take_string("leader", "trajectory", cfg.trajectory);

  p.limits.u_min = ini.take_optional_double("limits", "u_min");
  p.limits.u_max = ini.take_optional_double("limits", "u_max");

  p.sigma_x = ini.take_double("noise", "sigma_position", p.sigma_x);
  p.sigma_v = ini.take_double("noise", "sigma_velocity", p.sigma_v);

  cfg.bounds.omega_k_min = ini.take_optional_double("bounds", "omega_k_min");
  cfg.bounds.omega_k_max = ini.take_optional_double("bounds", "omega_k_max");
  cfg.bounds.omega_h_max = ini.take_optional_double("bounds", "omega_h_max");

  cfg.n_seeds = ini.take_int("compare", "n_seeds", cfg.n_seeds);

  FrequencyGrid& g = cfg.stability.grid;
  g.omega_min = ini.take_double("stability", "omega_min", g.omega_min);
  g.omega_max = ini.take_double("stability", "omega_max", g.omega_max);
  g.n_points = ini.take_int("stability", "n_points", g.n_points);

  SweepGrid& s = cfg.stability.sweep;
  s.omega_k_min = ini.take_double("sweep", "omega_k_min", s.omega_k_min);
  s.omega_k_max = ini.take_double("sweep", "omega_k_max", s.omega_k_max);
  s.omega_k_count = ini.take_int("sweep", "omega_k_count", s.omega_k_count);
  s.h_d_min = ini.take_double("sweep", "h_d_min", s.h_d_min);
  s.h_d_max = ini.take_double("sweep", "h_d_max", s.h_d_max);
  s.h_d_count = ini.take_int("sweep", "h_d_count", s.h_d_count);

  ini.reject_unconsumed();
  return cfg;
}

void validate_config(const RunConfig& config, bool allow_unstable) {
  const PlatoonConfig& p = config.platoon;
  if (p.n_followers < 1) {
    throw ConfigError("n_followers must be >= 1");
  }
  if (!(p.T > 0.0)) {
    throw ConfigError("time_step must be positive");
  }
  if (p.L < 0.0) {
    throw ConfigError("standstill_gap must be >= 0");
  }
  if (p.v0 < 0.0) {
    throw ConfigError("initial_speed must be >= 0");
  }
  if (p.duration < 0.0) {
    throw ConfigError("duration must be >= 0");
  }
  if (p.sigma_x < 0.0 || p.sigma_v < 0.0) {
    throw ConfigError("noise sigmas must be >= 0");
  }
  if (config.n_seeds < 1) {
    throw ConfigError("n_seeds must be >= 1");
  }

  const Mode modes[] = {Mode::Cacc1, Mode::Cacc2, Mode::Cacc3, Mode::Acc};
  const double h_d = p.gains.cacc1.h_d;
  for (const Mode mode : modes) {
    const ControllerGains& row = p.gains.row(mode);
    if (!(row.omega_k > 0.0) || !(row.h_d > 0.0)) {
      throw ConfigError(std::string("gains for ") + mode_label(mode) +
                        " must be positive");
    }
    if (row.h_d != h_d) {
      throw ConfigError(
          "all modes must share the same time headway h_d (spacing policy "
          "uses a single headway)");
    }
    if (config.bounds.omega_k_min && row.omega_k < *config.bounds.omega_k_min) {
      throw ConfigError(std::string("omega_k for ") + mode_label(mode) +
                        " is below bounds.omega_k_min");
    }
    if (config.bounds.omega_k_max && row.omega_k > *config.bounds.omega_k_max) {
      throw ConfigError(std::string("omega_k for ") + mode_label(mode) +
                        " exceeds bounds.omega_k_max");
    }
    if (config.bounds.omega_h_max &&
        row.omega_k * row.h_d > *config.bounds.omega_h_max) {
      throw ConfigError(std::string("omega_k*h_d for ") + mode_label(mode) +
                        " exceeds bounds.omega_h_max");
    }
    if (!allow_unstable && !region_check(mode, row.omega_k, row.h_d)) {
      throw ConfigError(
          std::string("gains violate string-stability region for ") +
          mode_label(mode));
    }
  }
  if (p.T >= h_d) {
    throw ConfigError(
        "explicit filter update unstable: time_step must be < h_d");
  }

  if (p.link.p_max < 0.0 || p.link.p_max > 1.0) {
    throw ConfigError("link p_max must be within [0, 1]");
  }
  if (p.link.kind == LinkModelKind::DistanceLogistic) {
    if (p.link.d_half < 0.0) {
      throw ConfigError("link d_half must be >= 0");
    }
    if (!(p.link.steepness > 0.0)) {
      throw ConfigError("link steepness must be positive");
    }
  }
  if (p.limits.u_min && p.limits.u_max && *p.limits.u_min >= *p.limits.u_max) {
    throw ConfigError("limits.u_min must be below limits.u_max");
  }

  validate_stability_options(config.stability);

  if (config.trajectory.empty()) {
    throw ConfigError("leader trajectory must be set");
  }
}

void validate_stability_options(const StabilityOptions& options) {
  const FrequencyGrid& g = options.grid;
  if (!(g.omega_min > 0.0) || !(g.omega_max > g.omega_min)) {
    throw ConfigError("stability grid requires 0 < omega_min < omega_max");
  }
  if (g.omega_min > 1e-3 || g.omega_max < 1e3 || g.n_points < 2000) {
    throw ConfigError(
        "stability grid must span at least [1e-3, 1e3] rad/s with >= 2000 "
        "points");
  }
  const SweepGrid& s = options.sweep;
  if (!(s.omega_k_min > 0.0) || s.omega_k_max < s.omega_k_min ||
      s.omega_k_count < 1 || !(s.h_d_min > 0.0) || s.h_d_max < s.h_d_min ||
      s.h_d_count < 1) {
    throw ConfigError("malformed region-sweep grid");
  }
}

LeaderTrajectory build_leader(const RunConfig& config,
                              const std::string& base_dir) {
  const PlatoonConfig& p = config.platoon;
  const std::string& name = config.trajectory;
  LeaderTrajectory leader;
  if (name == "synthetic:sine") {
    leader = synthetic_sine_leader(p.T, p.duration > 0.0 ? p.duration : 240.0);
  } else if (name == "synthetic:step") {
    leader =
        synthetic_step_leader(p.T, p.duration > 0.0 ? p.duration : 60.0, p.v0);
  } else if (name == "synthetic:constant") {
    leader = synthetic_constant_leader(
        p.T, p.duration > 0.0 ? p.duration : 240.0, p.v0);
  } else if (name.rfind("synthetic:", 0) == 0) {
    throw ConfigError("unknown synthetic trajectory '" + name +
                      "' (expected sine, step, or constant)");
  } else {
    std::filesystem::path path(name);
    if (path.is_relative() && !base_dir.empty()) {
      path = std::filesystem::path(base_dir) / path;
    }
    leader = load_leader_trajectory(path.string(), p.T, p.v0);
  }
  if (std::abs(leader.speed.front() - p.v0) > 1e-6) {
    std::ostringstream msg;
    msg << "trajectory initial speed " << leader.speed.front()
        << " does not match configured initial_speed " << p.v0;
    throw ConfigError(msg.str());
  }
  return leader;
}

}  // namespace cacc
