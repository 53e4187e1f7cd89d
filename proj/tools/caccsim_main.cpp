#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cacc/config.hpp"
#include "cacc/csvio.hpp"
#include "cacc/errors.hpp"
#include "cacc/sim.hpp"
#include "cacc/stability.hpp"

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
  std::string config_path;
  std::string output_dir;
  bool force = false;
  bool allow_unstable = false;
  int verbosity = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_output) {
  cmd->add_option("-c,--config", opts.config_path, "Run configuration file")
      ->required();
  if (with_output) {
    cmd->add_option("-o,--output", opts.output_dir,
                    "Output directory (default: $CACCSIM_OUTPUT_DIR or ./out)");
    cmd->add_flag("--force", opts.force,
                  "Overwrite existing output files");
  }
  cmd->add_flag("-v,--verbose", opts.verbosity, "Print progress details");
}

std::string resolve_output_dir(const CommonOpts& opts) {
  if (!opts.output_dir.empty()) return opts.output_dir;
  if (const char* env = std::getenv("CACCSIM_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return "out";
}

std::string config_dir(const std::string& config_path) {
  return fs::path(config_path).parent_path().string();
}

std::ofstream open_output(const fs::path& dir, const std::string& name,
                          bool force) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  if (fs::exists(path) && !force) {
    throw cacc::ConfigError("output file exists (use --force): " +
                            path.string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw cacc::ConfigError("cannot write " + path.string());
  }
  return out;
}

cacc::RunConfig load_with_overrides(const CommonOpts& opts) {
  cacc::RunConfig cfg = cacc::load_run_config(opts.config_path);
  if (opts.seed_set) {
    cfg.platoon.seed = opts.seed;
  }
  return cfg;
}

int cmd_simulate(const CommonOpts& opts) {
  cacc::RunConfig cfg = load_with_overrides(opts);
  cacc::validate_config(cfg, opts.allow_unstable);
  const cacc::LeaderTrajectory leader =
      cacc::build_leader(cfg, config_dir(opts.config_path));
  const cacc::RunResult result = cacc::run(cfg.platoon, leader);

  const fs::path dir = resolve_output_dir(opts);
  {
    std::ofstream out = open_output(dir, "trace.csv", opts.force);
    cacc::write_trace_csv(out, result.trace);
  }
  {
    std::ofstream out = open_output(dir, "metrics.csv", opts.force);
    cacc::write_metrics_csv(out, result.metrics);
  }
  if (opts.verbosity > 0) {
    std::cout << "simulated " << result.trace.n_steps() << " steps, "
              << result.trace.n_vehicles << " vehicles, scheme "
              << (cfg.platoon.scheme == cacc::Scheme::Dift ? "dift" : "fift")
              << ", seed " << cfg.platoon.seed << "\n";
  }
  std::cout << "wrote " << (dir / "trace.csv").string() << " and "
            << (dir / "metrics.csv").string() << "\n";
  if (result.metrics.collision) {
    std::cerr << "collision: gap closed at step "
              << result.metrics.collision_step
              << "; partial results written\n";
    return 2;
  }
  return 0;
}

int cmd_compare(const CommonOpts& opts, int seeds_override) {
  cacc::RunConfig cfg = load_with_overrides(opts);
  if (seeds_override > 0) {
    cfg.n_seeds = seeds_override;
  } else if (seeds_override < 0) {
    throw cacc::ConfigError("n_seeds must be >= 1");
  }
  cacc::validate_config(cfg, opts.allow_unstable);
  const cacc::LeaderTrajectory leader =
      cacc::build_leader(cfg, config_dir(opts.config_path));
  const cacc::ComparisonTable table =
      cacc::compare(cfg.platoon, leader, cfg.n_seeds);

  const fs::path dir = resolve_output_dir(opts);
  {
    std::ofstream out = open_output(dir, "compare.csv", opts.force);
    cacc::write_compare_csv(out, table);
  }

  auto ratio = [](double dift, double fift) {
    if (fift == 0.0) {
      return dift == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return dift / fift;
  };
  std::cout << "dift/fift std-dev ratios over " << table.n_seeds
            << " seeds (vehicle: e, speed_err, speed)\n";
  for (int i = 1; i < table.n_vehicles; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    std::cout << "vehicle " << i << ": "
              << cacc::fmt_float(ratio(table.dift.std_e[idx],
                                       table.fift.std_e[idx]))
              << ", "
              << cacc::fmt_float(ratio(table.dift.std_speed_err[idx],
                                       table.fift.std_speed_err[idx]))
              << ", "
              << cacc::fmt_float(ratio(table.dift.std_speed[idx],
                                       table.fift.std_speed[idx]))
              << "\n";
  }
  std::cout << "collisions: dift " << table.dift.collisions << "/"
            << table.n_seeds << ", fift " << table.fift.collisions << "/"
            << table.n_seeds << "\n";
  std::cout << "wrote " << (dir / "compare.csv").string() << "\n";
  return 0;
}

int cmd_stability(const CommonOpts& opts) {
  const cacc::RunConfig cfg = load_with_overrides(opts);
  cacc::validate_stability_options(cfg.stability);
  const cacc::FrequencyGrid& grid = cfg.stability.grid;
  const std::vector<double> omegas = grid.omegas();
  const fs::path dir = resolve_output_dir(opts);

  const cacc::Mode modes[] = {cacc::Mode::Cacc1, cacc::Mode::Cacc2,
                              cacc::Mode::Cacc3, cacc::Mode::Acc};
  std::vector<cacc::StabilityRow> rows;
  for (const cacc::Mode mode : modes) {
    const cacc::ControllerGains& g = cfg.platoon.gains.row(mode);
    cacc::StabilityRow row;
    row.mode = mode;
    row.omega_k = g.omega_k;
    row.h_d = g.h_d;
    const cacc::TransferFunction tf = cacc::build_ss(mode, g.omega_k, g.h_d);
    row.hinf = cacc::hinf_norm(tf, grid);
    row.closed_form_stable = cacc::region_check(mode, g.omega_k, g.h_d);
    rows.push_back(row);

    std::vector<double> mags;
    mags.reserve(omegas.size());
    for (const double omega : omegas) {
      mags.push_back(cacc::magnitude(tf, omega));
    }
    std::ofstream out = open_output(
        dir, std::string("bode_") + cacc::mode_name(mode) + ".csv", opts.force);
    cacc::write_bode_csv(out, omegas, mags);
  }
  {
    std::ofstream out = open_output(dir, "stability.csv", opts.force);
    cacc::write_stability_csv(out, rows);
  }
  {
    // Head-to-tail response of the configured platoon with every link up.
    std::vector<cacc::LinkState> links(
        static_cast<std::size_t>(cfg.platoon.n_followers),
        cacc::LinkState{true, true});
    if (!links.empty()) links[0].beta = false;
    const std::vector<double> mags = cacc::chain_magnitudes(
        cfg.platoon.gains, cfg.platoon.scheme, links, omegas);
    std::ofstream out = open_output(dir, "chain_bode.csv", opts.force);
    cacc::write_bode_csv(out, omegas, mags);
  }
  for (const cacc::StabilityRow& row : rows) {
    std::cout << cacc::mode_label(row.mode) << ": hinf "
              << cacc::fmt_float(row.hinf.norm) << " at omega "
              << cacc::fmt_float(row.hinf.argmax_omega) << ", closed-form "
              << (row.closed_form_stable ? "stable" : "unstable")
              << ", sweep "
              << (row.hinf.string_stable ? "stable" : "unstable") << "\n";
  }
  std::cout << "wrote " << (dir / "stability.csv").string()
            << ", per-mode bode CSVs, " << (dir / "chain_bode.csv").string()
            << "\n";
  return 0;
}

int cmd_region_sweep(const CommonOpts& opts) {
  const cacc::RunConfig cfg = load_with_overrides(opts);
  cacc::validate_stability_options(cfg.stability);
  const cacc::SweepGrid& sweep = cfg.stability.sweep;

  auto axis = [](double lo, double hi, int count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    }
    return out;
  };
  const std::vector<double> omega_ks =
      axis(sweep.omega_k_min, sweep.omega_k_max, sweep.omega_k_count);
  const std::vector<double> h_ds =
      axis(sweep.h_d_min, sweep.h_d_max, sweep.h_d_count);

  const cacc::Mode modes[] = {cacc::Mode::Cacc1, cacc::Mode::Cacc2,
                              cacc::Mode::Cacc3, cacc::Mode::Acc};
  std::vector<cacc::StabilityRow> rows;
  for (const cacc::Mode mode : modes) {
    for (const double omega_k : omega_ks) {
      for (const double h_d : h_ds) {
        cacc::StabilityRow row;
        row.mode = mode;
        row.omega_k = omega_k;
        row.h_d = h_d;
        row.hinf =
            cacc::hinf_norm(cacc::build_ss(mode, omega_k, h_d), cfg.stability.grid);
        row.closed_form_stable = cacc::region_check(mode, omega_k, h_d);
        rows.push_back(row);
      }
    }
  }
  const fs::path dir = resolve_output_dir(opts);
  {
    std::ofstream out = open_output(dir, "region.csv", opts.force);
    cacc::write_stability_csv(out, rows);
  }
  std::cout << "wrote " << (dir / "region.csv").string() << " (" << rows.size()
            << " rows)\n";
  return 0;
}

int cmd_validate(const CommonOpts& opts) {
  const cacc::RunConfig cfg = load_with_overrides(opts);
  cacc::validate_config(cfg, opts.allow_unstable);
  const cacc::LeaderTrajectory leader =
      cacc::build_leader(cfg, config_dir(opts.config_path));
  std::cout << "config ok: " << cfg.platoon.n_followers << " followers, "
            << leader.steps() << " trajectory steps, scheme "
            << (cfg.platoon.scheme == cacc::Scheme::Dift ? "dift" : "fift")
            << ", seed " << cfg.platoon.seed << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "caccsim: platoon simulator and string-stability analyzer for "
      "link-adaptive cooperative cruise control"};
  app.require_subcommand(1);

  CommonOpts sim_opts, cmp_opts, stab_opts, sweep_opts, val_opts;
  int seeds_override = 0;

  CLI::App* sim = app.add_subcommand(
      "simulate", "Run one simulation; write trace.csv and metrics.csv");
  add_common(sim, sim_opts, true);
  sim->add_flag("--allow-unstable", sim_opts.allow_unstable,
                "Skip the string-stability region check on gains");
  CLI::Option* sim_seed =
      sim->add_option("--seed", sim_opts.seed, "Override the config seed");

  CLI::App* cmp = app.add_subcommand(
      "compare", "Run dift vs fift over seeds; write compare.csv");
  add_common(cmp, cmp_opts, true);
  cmp->add_flag("--allow-unstable", cmp_opts.allow_unstable,
                "Skip the string-stability region check on gains");
  CLI::Option* cmp_seed =
      cmp->add_option("--seed", cmp_opts.seed, "Override the config base seed");
  cmp->add_option("--seeds", seeds_override,
                  "Override the number of seeds (>= 1)");

  CLI::App* stab = app.add_subcommand(
      "stability",
      "Analyze the configured gains; write stability.csv and bode CSVs");
  add_common(stab, stab_opts, true);

  CLI::App* sweep = app.add_subcommand(
      "region-sweep",
      "Sweep (omega_k, h_d) grids per mode; write region.csv");
  add_common(sweep, sweep_opts, true);

  CLI::App* val = app.add_subcommand(
      "validate", "Check the config and trajectory; write nothing");
  add_common(val, val_opts, false);
  val->add_flag("--allow-unstable", val_opts.allow_unstable,
                "Skip the string-stability region check on gains");
  CLI::Option* val_seed =
      val->add_option("--seed", val_opts.seed, "Override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  sim_opts.seed_set = sim_seed->count() > 0;
  cmp_opts.seed_set = cmp_seed->count() > 0;
  val_opts.seed_set = val_seed->count() > 0;

  try {
    if (app.got_subcommand(sim)) return cmd_simulate(sim_opts);
    if (app.got_subcommand(cmp)) return cmd_compare(cmp_opts, seeds_override);
    if (app.got_subcommand(stab)) return cmd_stability(stab_opts);
    if (app.got_subcommand(sweep)) return cmd_region_sweep(sweep_opts);
    if (app.got_subcommand(val)) return cmd_validate(val_opts);
  } catch (const cacc::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cacc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cacc::SimError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
