#pragma once

#include <string>
#include <vector>

namespace cacc {

// Uniformly sampled leader profile: speed[k] is the target speed at
// t = k*T and accel[k] the command applied over [k*T, (k+1)*T). The two
// series are consistent (speed integrates accel) and accel.back() == 0.
struct LeaderTrajectory {
  double T = 0.1;
  std::vector<double> speed;
  std::vector<double> accel;

  long steps() const { return static_cast<long>(speed.size()) - 1; }
};

// Loads a CSV with header "t,v" (s, m/s) or "t,a" (s, m/s^2) and resamples
// it to step T by linear interpolation, relative to the first sample time.
// Speed files derive accelerations by finite differences; acceleration
// files are integrated from v0. Throws cacc::ParseError with
// "<path>:<line>:" context on malformed input.
LeaderTrajectory load_leader_trajectory(const std::string& path, double T,
                                        double v0);

// Bundled oscillating profile: speed 25 + 2*sin(2*pi*0.05*t) m/s with a
// 2 m/s drop from t = 120 s on.
LeaderTrajectory synthetic_sine_leader(double T, double duration = 240.0);

// Constant speed v0, then a dv step at t_step.
LeaderTrajectory synthetic_step_leader(double T, double duration, double v0,
                                       double dv = -1.0, double t_step = 10.0);

LeaderTrajectory synthetic_constant_leader(double T, double duration,
                                           double v0);

LeaderTrajectory constant_accel_leader(double T, double duration, double v0,
                                       double a);

}  // namespace cacc
