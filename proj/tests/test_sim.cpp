#include "doctest.h"

#include "cacc/comm.hpp"
#include "cacc/csvio.hpp"
#include "cacc/errors.hpp"
#include "cacc/sim.hpp"
#include "cacc/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

using namespace cacc;

namespace {

PlatoonConfig perfect_links_config() {
    PlatoonConfig cfg;
    cfg.link.kind = LinkModelKind::BernoulliFixed;
    cfg.link.p_max = 1.0;
    return cfg;
}

// Leader that brakes at -8 m/s^2 from t = 5 s until standstill; harder than
// a follower clamped to [-1, 1] m/s^2 can match.
LeaderTrajectory hard_brake_leader(double T, double duration) {
    LeaderTrajectory out;
    out.T = T;
    const long n = std::lround(duration / T);
    out.speed.resize(static_cast<std::size_t>(n) + 1);
    for (long k = 0; k <= n; ++k) {
        const double t = k * T;
        out.speed[static_cast<std::size_t>(k)] =
            std::max(0.0, 25.0 - 8.0 * std::max(0.0, t - 5.0));
    }
    out.accel.resize(out.speed.size(), 0.0);
    for (std::size_t k = 0; k + 1 < out.speed.size(); ++k) {
        out.accel[k] = (out.speed[k + 1] - out.speed[k]) / T;
    }
    return out;
}

std::vector<double> column_max_abs_e(const RunMetrics& m) {
    std::vector<double> out;
    for (std::size_t i = 1; i < m.per_vehicle.size(); ++i) {
        out.push_back(m.per_vehicle[i].max_abs_e);
    }
    return out;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("a platoon starting at equilibrium stays there exactly") {
    PlatoonConfig cfg = perfect_links_config();
    cfg.n_followers = 4;
    LeaderTrajectory leader = synthetic_constant_leader(cfg.T, 20.0, cfg.v0);
    RunResult res = run(cfg, leader);

    REQUIRE(res.trace.n_vehicles == 5);
    REQUIRE(res.trace.n_steps() == 200);
    for (const TraceRow& row : res.trace.rows) {
        if (row.vehicle == 0) continue;
        CHECK(row.e == 0.0);      // exact: all quantities stay dyadic
        CHECK(row.v_err == 0.0);
        CHECK(row.u == 0.0);
    }
    for (std::size_t i = 1; i < res.metrics.per_vehicle.size(); ++i) {
        CHECK(res.metrics.per_vehicle[i].max_abs_e == 0.0);
        CHECK(res.metrics.per_vehicle[i].std_e == 0.0);
        CHECK(res.metrics.per_vehicle[i].std_speed_err == 0.0);
    }
    CHECK_FALSE(res.metrics.collision);
    CHECK(res.metrics.collision_step == -1);
}

TEST_CASE("trace rows are step-major with documented step-0 labels") {
    PlatoonConfig cfg = perfect_links_config();
    cfg.n_followers = 3;
    LeaderTrajectory leader = synthetic_constant_leader(cfg.T, 1.0, cfg.v0);
    RunResult res = run(cfg, leader);
    const RunTrace& tr = res.trace;

    REQUIRE(tr.rows.size() == static_cast<std::size_t>(4 * 11));
    CHECK(tr.at(0, 0).mode == TraceMode::Leader);
    CHECK(std::string(trace_mode_name(tr.at(0, 0).mode)) == "leader");
    for (int i = 1; i <= 3; ++i) {
        CHECK(tr.at(0, i).mode == TraceMode::Init);
        CHECK(tr.at(0, i).alpha == false);
        CHECK(tr.at(0, i).beta == false);
        CHECK(tr.at(0, i).e == 0.0);
        CHECK(tr.at(0, i).v_err == 0.0);
    }
    // Perfect links: first follower gets one predecessor, the rest two.
    CHECK(tr.at(1, 1).mode == TraceMode::Cacc2);
    CHECK(tr.at(1, 1).alpha);
    CHECK_FALSE(tr.at(1, 1).beta);
    CHECK(tr.at(1, 2).mode == TraceMode::Cacc1);
    CHECK(tr.at(1, 2).alpha);
    CHECK(tr.at(1, 2).beta);
    // Initial spacing honors the headway policy.
    CHECK(tr.at(0, 1).position == doctest::Approx(-30.0));
    CHECK(tr.at(0, 3).position == doctest::Approx(-90.0));
    // Step-major layout.
    CHECK(tr.rows[0].step == 0);
    CHECK(tr.rows[4].step == 1);
    CHECK(tr.rows[4].vehicle == 0);
}

TEST_CASE("runs are bitwise deterministic for a fixed seed") {
    PlatoonConfig cfg;
    cfg.n_followers = 5;
    cfg.link.p_max = 0.7;
    cfg.seed = 1234;
    LeaderTrajectory leader = synthetic_sine_leader(cfg.T, 40.0);
    RunResult a = run(cfg, leader);
    RunResult b = run(cfg, leader);
    REQUIRE(a.trace.rows.size() == b.trace.rows.size());
    for (std::size_t r = 0; r < a.trace.rows.size(); ++r) {
        CHECK(a.trace.rows[r].position == b.trace.rows[r].position);
        CHECK(a.trace.rows[r].velocity == b.trace.rows[r].velocity);
        CHECK(a.trace.rows[r].u == b.trace.rows[r].u);
        CHECK(a.trace.rows[r].alpha == b.trace.rows[r].alpha);
        CHECK(a.trace.rows[r].beta == b.trace.rows[r].beta);
    }

    PlatoonConfig other = cfg;
    other.seed = 1235;
    RunResult c = run(other, leader);
    bool any_diff = false;
    for (std::size_t r = 0; r < a.trace.rows.size() && !any_diff; ++r) {
        any_diff = a.trace.rows[r].alpha != c.trace.rows[r].alpha ||
                   a.trace.rows[r].position != c.trace.rows[r].position;
    }
    CHECK(any_diff);
}

TEST_CASE("trace indicators replay the counter-based draws exactly") {
    PlatoonConfig cfg;
    cfg.n_followers = 4;
    cfg.link.kind = LinkModelKind::BernoulliFixed;
    cfg.link.p_max = 0.5;
    cfg.seed = 99;
    LeaderTrajectory leader = synthetic_constant_leader(cfg.T, 5.0, cfg.v0);
    RunResult res = run(cfg, leader);
    for (long k = 1; k <= res.trace.n_steps(); ++k) {
        for (int i = 1; i <= 4; ++i) {
            const TraceRow& row = res.trace.at(k, i);
            const bool alpha =
                counter_uniform(cfg.seed, static_cast<std::uint64_t>(k),
                                static_cast<std::uint64_t>(i), 0) < 0.5;
            CHECK(row.alpha == alpha);
            if (i >= 2) {
                const bool beta =
                    counter_uniform(cfg.seed, static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(i), 1) < 0.5;
                CHECK(row.beta == beta);
            } else {
                CHECK_FALSE(row.beta);  // no second predecessor to hear from
            }
        }
    }
}

TEST_CASE("dead links force the fallback mode everywhere") {
    PlatoonConfig cfg;
    cfg.n_followers = 3;
    cfg.link.kind = LinkModelKind::BernoulliFixed;
    cfg.link.p_max = 0.0;
    LeaderTrajectory leader = synthetic_constant_leader(cfg.T, 10.0, cfg.v0);
    RunResult res = run(cfg, leader);
    for (long k = 1; k <= res.trace.n_steps(); ++k) {
        for (int i = 1; i <= 3; ++i) {
            CHECK(res.trace.at(k, i).mode == TraceMode::Acc);
            CHECK(res.trace.at(k, i).u == 0.0);  // equilibrium needs no input
        }
    }
    CHECK_FALSE(res.metrics.collision);
}

TEST_CASE("speed-step scenario reproduces frozen spacing-error peaks") {
    PlatoonConfig cfg = perfect_links_config();
    LeaderTrajectory leader = synthetic_step_leader(cfg.T, 60.0, cfg.v0);
    RunResult res = run(cfg, leader);
    REQUIRE_FALSE(res.metrics.collision);

    const std::vector<double> expected{0.050000, 0.456938, 0.382691,
                                       0.322603, 0.304601, 0.271568,
                                       0.245854, 0.222314, 0.199803};
    std::vector<double> got = column_max_abs_e(res.metrics);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CAPTURE(i);
        CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-4));
    }
    // Peaks shrink toward the tail once both feedforward links are active.
    for (std::size_t i = 2; i < got.size(); ++i) {
        CHECK(got[i] <= got[i - 1] + 1e-12);
    }
}

TEST_CASE("oscillating-leader scenario reproduces frozen dispersion metrics") {
    PlatoonConfig cfg = perfect_links_config();
    LeaderTrajectory leader = synthetic_sine_leader(cfg.T);
    RunResult res = run(cfg, leader);
    REQUIRE_FALSE(res.metrics.collision);

    const std::vector<double> expected_std_e{
        0.009248, 0.674663, 0.639343, 0.522968, 0.423158,
        0.343619, 0.279975, 0.228812, 0.187633};
    const std::vector<double> expected_max_e{
        0.110965, 0.983645, 0.935060, 0.764818, 0.647320,
        0.552393, 0.467384, 0.397663, 0.341293};
    for (std::size_t i = 1; i <= 9; ++i) {
        CAPTURE(i);
        CHECK(res.metrics.per_vehicle[i].std_e ==
              doctest::Approx(expected_std_e[i - 1]).epsilon(1e-4));
        CHECK(res.metrics.per_vehicle[i].max_abs_e ==
              doctest::Approx(expected_max_e[i - 1]).epsilon(1e-4));
    }
    for (std::size_t i = 3; i <= 9; ++i) {
        CHECK(res.metrics.per_vehicle[i].std_e <=
              res.metrics.per_vehicle[i - 1].std_e + 1e-12);
    }
}

TEST_CASE("tail peak error converges first-order under time-step halving") {
    const std::vector<double> steps{0.1, 0.05, 0.025};
    const std::vector<double> expected{0.199803488, 0.196934955, 0.195739351};
    std::vector<double> tail;
    for (double T : steps) {
        PlatoonConfig cfg = perfect_links_config();
        cfg.T = T;
        LeaderTrajectory leader = synthetic_step_leader(T, 60.0, cfg.v0);
        RunResult res = run(cfg, leader);
        REQUIRE_FALSE(res.metrics.collision);
        tail.push_back(res.metrics.per_vehicle.back().max_abs_e);
    }
    for (std::size_t i = 0; i < tail.size(); ++i) {
        CAPTURE(i);
        CHECK(tail[i] == doctest::Approx(expected[i]).epsilon(1e-6));
    }
    // Successive refinement increments shrink roughly by the step ratio.
    const double ratio = (tail[2] - tail[1]) / (tail[1] - tail[0]);
    CHECK(ratio == doctest::Approx(0.416799).epsilon(1e-3));
    CHECK(ratio > 0.3);
    CHECK(ratio < 0.7);
}

TEST_CASE("an unmatchable braking leader closes the gap and halts the run") {
    PlatoonConfig cfg = perfect_links_config();
    cfg.n_followers = 1;
    cfg.limits.u_min = -1.0;
    cfg.limits.u_max = 1.0;
    LeaderTrajectory leader = hard_brake_leader(cfg.T, 30.0);
    RunResult res = run(cfg, leader);

    CHECK(res.metrics.collision);
    CHECK(res.metrics.collision_step == 80);
    // Partial trace: steps 0..80 for 2 vehicles.
    CHECK(res.trace.rows.size() == static_cast<std::size_t>(2 * 81));
    CHECK(res.trace.n_steps() == 80);
    // The follower's command respects the clamp and saturates at it.
    bool hit_floor = false;
    for (long k = 1; k <= 80; ++k) {
        const double u = res.trace.at(k, 1).u;
        CHECK(u >= -1.0);
        CHECK(u <= 1.0);
        hit_floor = hit_floor || u == -1.0;
    }
    CHECK(hit_floor);
    // Final recorded gap is indeed closed.
    const TraceRow& lead = res.trace.at(80, 0);
    const TraceRow& tail = res.trace.at(80, 1);
    CHECK(lead.position - tail.position <= 0.0);
}

TEST_CASE("all-links-down platoons diverge and collide identically per scheme") {
    // With every link down both schemes run the same fallback controller,
    // whose delayed discrete loop is divergent at the default gains; the
    // run must stop at the first closed gap rather than blow up.
    LeaderTrajectory leader = synthetic_sine_leader(0.1);
    PlatoonConfig dift;
    dift.link.kind = LinkModelKind::BernoulliFixed;
    dift.link.p_max = 0.0;
    PlatoonConfig fift = dift;
    fift.scheme = Scheme::Fift;

    RunResult a = run(dift, leader);
    RunResult b = run(fift, leader);
    CHECK(a.metrics.collision);
    CHECK(a.metrics.collision_step == 27);
    CHECK(b.metrics.collision_step == 27);
    REQUIRE(a.trace.rows.size() == b.trace.rows.size());
    for (std::size_t r = 0; r < a.trace.rows.size(); ++r) {
        CHECK(a.trace.rows[r].position == b.trace.rows[r].position);
        CHECK(a.trace.rows[r].mode == b.trace.rows[r].mode);
    }
}

TEST_CASE("duration truncates the replayed trajectory") {
    PlatoonConfig cfg = perfect_links_config();
    cfg.duration = 1.0;
    LeaderTrajectory leader = synthetic_sine_leader(cfg.T);
    RunResult res = run(cfg, leader);
    CHECK(res.trace.n_steps() == 10);
}

TEST_CASE("mismatched trajectory step is rejected") {
    PlatoonConfig cfg = perfect_links_config();
    LeaderTrajectory leader = synthetic_constant_leader(0.05, 10.0, cfg.v0);
    CHECK_THROWS_WITH_AS(run(cfg, leader),
                         "run: trajectory step does not match time_step",
                         ConfigError);
}

TEST_CASE("runaway states surface as simulation errors") {
    PlatoonConfig cfg = perfect_links_config();
    cfg.n_followers = 1;
    LeaderTrajectory leader = constant_accel_leader(cfg.T, 5.0, cfg.v0, 1e308);
    CHECK_THROWS_AS(run(cfg, leader), SimError);
}

TEST_CASE("sensor noise perturbs the run but stays seed-deterministic") {
    PlatoonConfig cfg = perfect_links_config();
    cfg.n_followers = 2;
    cfg.sigma_x = 0.1;
    cfg.sigma_v = 0.05;
    LeaderTrajectory leader = synthetic_constant_leader(cfg.T, 20.0, cfg.v0);
    RunResult a = run(cfg, leader);
    RunResult b = run(cfg, leader);
    for (std::size_t r = 0; r < a.trace.rows.size(); ++r) {
        CHECK(a.trace.rows[r].position == b.trace.rows[r].position);
    }
    // Unlike the noise-free equilibrium, commands are now nonzero.
    bool any_u = false;
    for (long k = 1; k <= a.trace.n_steps(); ++k) {
        any_u = any_u || a.trace.at(k, 1).u != 0.0;
    }
    CHECK(any_u);
    CHECK(a.metrics.per_vehicle[1].std_e > 0.0);
}

TEST_CASE("integrator choice changes the trajectory") {
    PlatoonConfig zoh = perfect_links_config();
    zoh.n_followers = 1;
    PlatoonConfig euler = zoh;
    euler.integrator = Integrator::Euler;
    LeaderTrajectory leader = synthetic_step_leader(zoh.T, 30.0, zoh.v0);
    RunResult a = run(zoh, leader);
    RunResult b = run(euler, leader);
    bool any_diff = false;
    for (std::size_t r = 0; r < a.trace.rows.size(); ++r) {
        any_diff = any_diff || a.trace.rows[r].position != b.trace.rows[r].position;
    }
    CHECK(any_diff);
}

TEST_CASE("scheme comparison shares draws and validates its inputs") {
    LeaderTrajectory leader = synthetic_sine_leader(0.1, 60.0);

    SUBCASE("perfect links make the two schemes coincide") {
        PlatoonConfig base = perfect_links_config();
        base.n_followers = 3;
        ComparisonTable table = compare(base, leader, 2);
        CHECK(table.n_vehicles == 4);
        CHECK(table.n_seeds == 2);
        CHECK(table.dift.collisions == 0);
        CHECK(table.fift.collisions == 0);
        REQUIRE(table.dift.std_e.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(table.dift.std_e[i] == doctest::Approx(table.fift.std_e[i]).epsilon(1e-12));
            CHECK(table.dift.std_speed[i] ==
                  doctest::Approx(table.fift.std_speed[i]).epsilon(1e-12));
        }
        CHECK(table.dift.std_e[1] > 0.0);
    }
    SUBCASE("configs must differ only in scheme") {
        PlatoonConfig dift = perfect_links_config();
        PlatoonConfig fift = dift;
        fift.scheme = Scheme::Fift;
        fift.seed = dift.seed + 1;
        CHECK_THROWS_WITH_AS(compare(dift, fift, leader, 2),
                             "compare requires configs identical except scheme "
                             "(dift, fift)",
                             ConfigError);
        PlatoonConfig also_dift = dift;
        CHECK_THROWS_AS(compare(dift, also_dift, leader, 2), ConfigError);
        fift.seed = dift.seed;
        CHECK_THROWS_AS(compare(dift, fift, leader, 0), ConfigError);
        CHECK_NOTHROW(compare(dift, fift, leader, 1));
    }
    SUBCASE("collision counts accumulate over seeds") {
        PlatoonConfig base;
        base.n_followers = 9;
        base.link.kind = LinkModelKind::BernoulliFixed;
        base.link.p_max = 0.0;  // fallback everywhere: every seed collides
        ComparisonTable table = compare(base, leader, 2);
        CHECK(table.dift.collisions == 2);
        CHECK(table.fift.collisions == 2);
    }
}

TEST_CASE("csv writers emit documented headers and shortest-form floats") {
    CHECK(fmt_float(0.1) == "0.1");
    CHECK(fmt_float(-30.0) == "-30");
    CHECK(fmt_float(0.123456789123) == "0.123456789");

    PlatoonConfig cfg = perfect_links_config();
    cfg.n_followers = 1;
    LeaderTrajectory leader = synthetic_constant_leader(cfg.T, 1.0, cfg.v0);
    RunResult res = run(cfg, leader);

    std::ostringstream trace_out;
    write_trace_csv(trace_out, res.trace);
    std::istringstream trace_in(trace_out.str());
    std::string line;
    REQUIRE(std::getline(trace_in, line));
    CHECK(line == "step,vehicle,position,velocity,u,e,mode,alpha,beta");
    std::size_t data_lines = 0;
    while (std::getline(trace_in, line)) ++data_lines;
    CHECK(data_lines == res.trace.rows.size());

    std::ostringstream metrics_out;
    write_metrics_csv(metrics_out, res.metrics);
    std::istringstream metrics_in(metrics_out.str());
    REQUIRE(std::getline(metrics_in, line));
    CHECK(line == "vehicle,max_abs_e,std_e,std_speed_err,std_speed");

    ComparisonTable table = compare(cfg, leader, 1);
    std::ostringstream cmp_out;
    write_compare_csv(cmp_out, table);
    std::istringstream cmp_in(cmp_out.str());
    REQUIRE(std::getline(cmp_in, line));
    CHECK(line == "vehicle,scheme,std_e,std_speed_err,std_speed");
    data_lines = 0;
    while (std::getline(cmp_in, line)) ++data_lines;
    CHECK(data_lines == 4);  // two vehicles x two schemes

    std::vector<StabilityRow> rows(1);
    rows[0].mode = Mode::Acc;
    rows[0].omega_k = 1.45;
    rows[0].h_d = 1.0;
    rows[0].hinf.norm = 0.5;
    rows[0].hinf.string_stable = true;
    rows[0].closed_form_stable = true;
    std::ostringstream stab_out;
    write_stability_csv(stab_out, rows);
    std::istringstream stab_in(stab_out.str());
    REQUIRE(std::getline(stab_in, line));
    CHECK(line ==
          "mode,omega_k,h_d,hinf_norm,argmax_omega,closed_form_stable,sweep_stable");
    REQUIRE(std::getline(stab_in, line));
    CHECK(line.rfind("acc,1.45,1,0.5,", 0) == 0);

    std::ostringstream bode_out;
    write_bode_csv(bode_out, {1.0, 2.0}, {0.5, 0.25});
    CHECK(bode_out.str() == "omega,magnitude\n1,0.5\n2,0.25\n");
}

}  // TEST_SUITE
