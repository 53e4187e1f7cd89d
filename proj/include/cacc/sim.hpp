#pragma once

#include <vector>

#include "cacc/config.hpp"

namespace cacc {

// Mode column of a trace row. Leader rows are always "leader"; follower
// rows at step 0 are "init" (no command has been computed yet).
enum class TraceMode { Leader, Init, Cacc1, Cacc2, Cacc3, Acc };

const char* trace_mode_name(TraceMode mode);
TraceMode trace_mode_from(Mode mode);

struct TraceRow {
  long step = 0;
  int vehicle = 0;
  double position = 0.0;  // m
  double velocity = 0.0;  // m/s
  double u = 0.0;         // m/s^2; applied command
  double e = 0.0;         // m; spacing error (0 for the leader)
  double v_err = 0.0;     // m/s; v_{i-1} - v_i (0 for the leader)
  TraceMode mode = TraceMode::Init;
  bool alpha = false;
  bool beta = false;
};

// Step-major rows: vehicles 0..n for step 0, then step 1, ...
struct RunTrace {
  int n_vehicles = 0;  // leader + followers
  std::vector<TraceRow> rows;

  long n_steps() const {
    return n_vehicles == 0
               ? 0
               : static_cast<long>(rows.size()) / n_vehicles - 1;
  }
  const TraceRow& at(long step, int vehicle) const {
    return rows[static_cast<std::size_t>(step) *
                    static_cast<std::size_t>(n_vehicles) +
                static_cast<std::size_t>(vehicle)];
  }
};

// Aggregates per vehicle over steps 1..end (step 0 excluded); std devs are
// population standard deviations.
struct VehicleMetrics {
  double max_abs_e = 0.0;
  double std_e = 0.0;
  double std_speed_err = 0.0;
  double std_speed = 0.0;
};

struct RunMetrics {
  std::vector<VehicleMetrics> per_vehicle;  // index = vehicle id
  bool collision = false;
  long collision_step = -1;
};

struct RunResult {
  RunTrace trace;
  RunMetrics metrics;
};

// Runs one platoon simulation. Per step: (1) sample the topology from the
// previous step's positions, (2) compute every follower's command from
// previous-step quantities only, (3) advance all plants, (4) record the
// trace row. The leader replays its trajectory acceleration. A closed gap
// (<= 0) halts the run early with metrics.collision set and a partial
// trace; non-finite states or commands raise cacc::SimError.
RunResult run(const PlatoonConfig& config, const LeaderTrajectory& leader);

// Mean-over-seeds per-vehicle std-dev metrics for one scheme, plus how
// many of the seeds ended in a collision (their partial-run metrics still
// enter the means; early degradation is part of the measured behavior).
struct SchemeStats {
  std::vector<double> std_e;
  std::vector<double> std_speed_err;
  std::vector<double> std_speed;
  int collisions = 0;
};

struct ComparisonTable {
  int n_vehicles = 0;
  int n_seeds = 0;
  SchemeStats dift;
  SchemeStats fift;
};

// Runs both schemes over seeds base.seed .. base.seed + n_seeds - 1. The
// counter-based draws are shared per seed, so with a distance-independent
// link model both schemes see identical topologies; with a
// distance-dependent model the indicators may diverge once trajectories
// do. Requires the two configs to differ only in scheme.
ComparisonTable compare(const PlatoonConfig& config_dift,
                        const PlatoonConfig& config_fift,
                        const LeaderTrajectory& leader, int n_seeds);

// Convenience overload: derives both scheme configs from one base config.
ComparisonTable compare(const PlatoonConfig& base,
                        const LeaderTrajectory& leader, int n_seeds);

}  // namespace cacc
