#include "cacc/sim.hpp"

#include <cmath>
#include <string>

#include "cacc/errors.hpp"

namespace cacc {

namespace {

// Noise draws use uniform-stream slots above the two link slots.
constexpr std::uint64_t kNoiseSlotX = 2;
constexpr std::uint64_t kNoiseSlotV = 4;

double pstdev(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double mean = 0.0;
  for (const double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (const double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

RunMetrics compute_metrics(const RunTrace& trace, bool collision,
                           long collision_step) {
  RunMetrics metrics;
  metrics.collision = collision;
  metrics.collision_step = collision_step;
  metrics.per_vehicle.resize(static_cast<std::size_t>(trace.n_vehicles));
  const long last = trace.n_steps();
  for (int i = 0; i < trace.n_vehicles; ++i) {
    std::vector<double> es, verrs, vs;
    es.reserve(static_cast<std::size_t>(last));
    verrs.reserve(static_cast<std::size_t>(last));
    vs.reserve(static_cast<std::size_t>(last));
    double max_abs_e = 0.0;
    for (long k = 1; k <= last; ++k) {
      const TraceRow& row = trace.at(k, i);
      es.push_back(row.e);
      verrs.push_back(row.v_err);
      vs.push_back(row.velocity);
      max_abs_e = std::max(max_abs_e, std::abs(row.e));
    }
    VehicleMetrics& m = metrics.per_vehicle[static_cast<std::size_t>(i)];
    m.max_abs_e = max_abs_e;
    m.std_e = pstdev(es);
    m.std_speed_err = pstdev(verrs);
    m.std_speed = pstdev(vs);
  }
  return metrics;
}

}  // namespace

const char* trace_mode_name(TraceMode mode) {
  switch (mode) {
    case TraceMode::Leader: return "leader";
    case TraceMode::Init: return "init";
    case TraceMode::Cacc1: return "cacc1";
    case TraceMode::Cacc2: return "cacc2";
    case TraceMode::Cacc3: return "cacc3";
    case TraceMode::Acc: return "acc";
  }
  return "?";
}

TraceMode trace_mode_from(Mode mode) {
  switch (mode) {
    case Mode::Cacc1: return TraceMode::Cacc1;
    case Mode::Cacc2: return TraceMode::Cacc2;
    case Mode::Cacc3: return TraceMode::Cacc3;
    case Mode::Acc: return TraceMode::Acc;
  }
  return TraceMode::Acc;
}

RunResult run(const PlatoonConfig& config, const LeaderTrajectory& leader) {
  const int n = config.n_followers;
  if (n < 1) throw ConfigError("run: n_followers must be >= 1");
  if (!(config.T > 0.0)) throw ConfigError("run: time_step must be positive");
  const double h_d = config.gains.cacc1.h_d;
  if (!(h_d > 0.0) || config.T >= h_d) {
    throw ConfigError(
        "explicit filter update unstable: time_step must be < h_d");
  }
  if (leader.T != config.T) {
    throw ConfigError("run: trajectory step does not match time_step");
  }
  long n_steps = leader.steps();
  if (config.duration > 0.0) {
    n_steps = std::min(n_steps, std::lround(config.duration / config.T));
  }
  if (n_steps < 1) {
    throw ConfigError("run: needs at least one step");
  }

  std::vector<VehicleState> cur(static_cast<std::size_t>(n) + 1);
  const double gap0 = h_d * config.v0 + config.L;
  for (int i = 0; i <= n; ++i) {
    cur[static_cast<std::size_t>(i)].position = -i * gap0;
    cur[static_cast<std::size_t>(i)].velocity = config.v0;
  }

  RunResult result;
  RunTrace& trace = result.trace;
  trace.n_vehicles = n + 1;
  trace.rows.reserve(static_cast<std::size_t>(n_steps + 1) *
                     static_cast<std::size_t>(n + 1));

  auto append_rows = [&](long step, const std::vector<TraceMode>& modes,
                         const CommTopology* topo) {
    for (int i = 0; i <= n; ++i) {
      TraceRow row;
      row.step = step;
      row.vehicle = i;
      const VehicleState& s = cur[static_cast<std::size_t>(i)];
      row.position = s.position;
      row.velocity = s.velocity;
      row.u = s.accel_cmd;
      if (i >= 1) {
        const VehicleState& pred = cur[static_cast<std::size_t>(i) - 1];
        row.e = pred.position - s.position - h_d * s.velocity - config.L;
        row.v_err = pred.velocity - s.velocity;
        if (topo != nullptr) {
          row.alpha = topo->links[static_cast<std::size_t>(i) - 1].alpha;
          row.beta = topo->links[static_cast<std::size_t>(i) - 1].beta;
        }
      }
      row.mode = modes[static_cast<std::size_t>(i)];
      trace.rows.push_back(row);
    }
  };

  std::vector<TraceMode> modes(static_cast<std::size_t>(n) + 1,
                               TraceMode::Init);
  modes[0] = TraceMode::Leader;
  append_rows(0, modes, nullptr);

  bool collision = false;
  long collision_step = -1;
  std::vector<double> positions(static_cast<std::size_t>(n) + 1);
  std::vector<CommandResult> cmds(static_cast<std::size_t>(n) + 1);

  for (long k = 1; k <= n_steps && !collision; ++k) {
    // (1) Topology from the previous step's positions.
    for (int i = 0; i <= n; ++i) {
      positions[static_cast<std::size_t>(i)] =
          cur[static_cast<std::size_t>(i)].position;
    }
    const CommTopology topo =
        sample_topology(config.link, positions, config.seed, k);

    // (2) Follower commands from previous-step quantities only.
    for (int i = 1; i <= n; ++i) {
      const LinkState& ls = topo.links[static_cast<std::size_t>(i) - 1];
      const ControllerGains& row =
          select_mode(ls.alpha, ls.beta, i, config.scheme, config.gains);
      modes[static_cast<std::size_t>(i)] = trace_mode_from(mode_of(row));

      const VehicleState& self = cur[static_cast<std::size_t>(i)];
      const VehicleState& pred = cur[static_cast<std::size_t>(i) - 1];
      ControlInputs inputs;
      inputs.x_pred = pred.position;
      inputs.v_pred = pred.velocity;
      if (config.sigma_x > 0.0) {
        inputs.x_pred += config.sigma_x *
                         counter_normal(config.seed, static_cast<std::uint64_t>(k),
                                        static_cast<std::uint64_t>(i), kNoiseSlotX);
      }
      if (config.sigma_v > 0.0) {
        inputs.v_pred += config.sigma_v *
                         counter_normal(config.seed, static_cast<std::uint64_t>(k),
                                        static_cast<std::uint64_t>(i), kNoiseSlotV);
      }
      inputs.x_self = self.position;
      inputs.v_self = self.velocity;
      inputs.u_self_prev = self.accel_cmd;
      inputs.L = config.L;
      if (ls.alpha) {
        inputs.u_pred1_prev = pred.accel_cmd;
      }
      if (i >= 2 && ls.beta) {
        inputs.u_pred2_prev = cur[static_cast<std::size_t>(i) - 2].accel_cmd;
      }

      cmds[static_cast<std::size_t>(i)] =
          control_command(inputs, row, self, config.T, config.limits);
      if (!std::isfinite(cmds[static_cast<std::size_t>(i)].u)) {
        throw SimError("non-finite command for vehicle " + std::to_string(i) +
                       " at step " + std::to_string(k));
      }
    }
    cmds[0] = CommandResult{leader.accel[static_cast<std::size_t>(k) - 1], 0.0,
                            0.0};

    // (3) Advance all plants.
    for (int i = 0; i <= n; ++i) {
      VehicleState& s = cur[static_cast<std::size_t>(i)];
      const CommandResult& cmd = cmds[static_cast<std::size_t>(i)];
      s.ff_state_1 = cmd.ff_1;
      s.ff_state_2 = cmd.ff_2;
      s = step_plant(s, cmd.u, config.T, config.integrator);
      if (!std::isfinite(s.position) || !std::isfinite(s.velocity)) {
        throw SimError("non-finite state for vehicle " + std::to_string(i) +
                       " at step " + std::to_string(k));
      }
    }

    // (4) Record the step; halt on a closed gap.
    append_rows(k, modes, &topo);
    for (int i = 1; i <= n; ++i) {
      if (cur[static_cast<std::size_t>(i) - 1].position -
              cur[static_cast<std::size_t>(i)].position <=
          0.0) {
        collision = true;
        collision_step = k;
      }
    }
  }

  result.metrics = compute_metrics(trace, collision, collision_step);
  return result;
}

ComparisonTable compare(const PlatoonConfig& config_dift,
                        const PlatoonConfig& config_fift,
                        const LeaderTrajectory& leader, int n_seeds) {
  if (n_seeds < 1) {
    throw ConfigError("n_seeds must be >= 1");
  }
  PlatoonConfig rescheme = config_dift;
  rescheme.scheme = config_fift.scheme;
  if (config_dift.scheme != Scheme::Dift ||
      config_fift.scheme != Scheme::Fift || !(rescheme == config_fift)) {
    throw ConfigError(
        "compare requires configs identical except scheme (dift, fift)");
  }

  ComparisonTable table;
  table.n_vehicles = config_dift.n_followers + 1;
  table.n_seeds = n_seeds;
  const std::size_t n_vehicles = static_cast<std::size_t>(table.n_vehicles);
  for (SchemeStats* stats : {&table.dift, &table.fift}) {
    stats->std_e.assign(n_vehicles, 0.0);
    stats->std_speed_err.assign(n_vehicles, 0.0);
    stats->std_speed.assign(n_vehicles, 0.0);
  }

  for (int j = 0; j < n_seeds; ++j) {
    for (const PlatoonConfig* base : {&config_dift, &config_fift}) {
      PlatoonConfig cfg = *base;
      cfg.seed = base->seed + static_cast<std::uint64_t>(j);
      const RunResult result = run(cfg, leader);
      SchemeStats& stats =
          base->scheme == Scheme::Dift ? table.dift : table.fift;
      stats.collisions += result.metrics.collision ? 1 : 0;
      for (std::size_t i = 0; i < n_vehicles; ++i) {
        const VehicleMetrics& m = result.metrics.per_vehicle[i];
        stats.std_e[i] += m.std_e / n_seeds;
        stats.std_speed_err[i] += m.std_speed_err / n_seeds;
        stats.std_speed[i] += m.std_speed / n_seeds;
      }
    }
  }
  return table;
}

ComparisonTable compare(const PlatoonConfig& base,
                        const LeaderTrajectory& leader, int n_seeds) {
  PlatoonConfig dift = base;
  dift.scheme = Scheme::Dift;
  PlatoonConfig fift = base;
  fift.scheme = Scheme::Fift;
  return compare(dift, fift, leader, n_seeds);
}

}  // namespace cacc
