#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cacc/comm.hpp"
#include "cacc/control.hpp"
#include "cacc/dynamics.hpp"
#include "cacc/stability.hpp"
#include "cacc/trajectory.hpp"

namespace cacc {

// Everything one simulation run needs besides the leader profile.
struct PlatoonConfig {
  int n_followers = 9;
  double T = 0.1;    // s
  double L = 5.0;    // m; standstill gap
  double v0 = 25.0;  // m/s; initial speed of every vehicle
  GainsTable gains;
  Scheme scheme = Scheme::Dift;
  LinkModel link;
  std::uint64_t seed = 42;
  double duration = 0.0;  // s; 0 = run the full trajectory
  Integrator integrator = Integrator::Zoh;
  ActuatorLimits limits;
  double sigma_x = 0.0;  // m; sensor noise on the predecessor position
  double sigma_v = 0.0;  // m/s; sensor noise on the predecessor speed

  bool operator==(const PlatoonConfig&) const = default;
};

// (omega_k, h_d) grid for the region-sweep command; linear spacing.
struct SweepGrid {
  double omega_k_min = 0.3;
  double omega_k_max = 2.0;
  int omega_k_count = 18;
  double h_d_min = 0.5;
  double h_d_max = 2.0;
  int h_d_count = 7;

  bool operator==(const SweepGrid&) const = default;
};

struct StabilityOptions {
  FrequencyGrid grid;
  SweepGrid sweep;

  bool operator==(const StabilityOptions&) const = default;
};

// Optional user-configured caps on the gains, for noise-mitigation or
// actuator-headroom policies that have no closed form here.
struct Bounds {
  std::optional<double> omega_k_min;
  std::optional<double> omega_k_max;
  std::optional<double> omega_h_max;  // cap on omega_k * h_d

  bool operator==(const Bounds&) const = default;
};

struct RunConfig {
  PlatoonConfig platoon;
  // "synthetic:sine", "synthetic:step", "synthetic:constant", or a CSV path
  // resolved relative to the config file's directory.
  std::string trajectory = "synthetic:sine";
  int n_seeds = 20;
  StabilityOptions stability;
  Bounds bounds;

  bool operator==(const RunConfig&) const = default;
};

// Parses an INI-style config (sections, key = value, '#'/';' comment
// lines). Unknown sections or keys and malformed values raise
// cacc::ParseError / cacc::ConfigError with "<path>:<line>:" context.
RunConfig load_run_config(const std::string& path);

// Startup validation shared by simulate/compare/validate: positive core
// parameters, a uniform time headway across modes, T < h_d, the
// string-stability region per mode (skippable via allow_unstable),
// optional gain caps, and link-model sanity. Throws cacc::ConfigError.
void validate_config(const RunConfig& config, bool allow_unstable = false);

// Frequency/sweep grid checks used by the analysis commands (which do not
// need the rest of the run validation: instability there is data).
void validate_stability_options(const StabilityOptions& options);

// Builds the leader profile named by config.trajectory (base_dir anchors
// relative CSV paths) and checks its initial speed against v0.
LeaderTrajectory build_leader(const RunConfig& config,
                              const std::string& base_dir);

}  // namespace cacc
