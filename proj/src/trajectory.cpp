#include "cacc/trajectory.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
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

double parse_number(const std::string& field, const std::string& path,
                    int line) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    throw ParseError(path + ":" + std::to_string(line) +
                     ": expected a number, got '" + field + "'");
  }
  if (used != field.size() || !std::isfinite(value)) {
    throw ParseError(path + ":" + std::to_string(line) +
                     ": expected a finite number, got '" + field + "'");
  }
  return value;
}

void check_step(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw ConfigError("trajectory time step must be finite and positive");
  }
}

// Linear interpolation of (ts, ys) at t; ts strictly increasing, t within
// [ts.front(), ts.back()].
double interp(const std::vector<double>& ts, const std::vector<double>& ys,
              double t) {
  std::size_t hi = 1;
  while (hi + 1 < ts.size() && ts[hi] < t) ++hi;
  const double t0 = ts[hi - 1];
  const double t1 = ts[hi];
  const double w = (t - t0) / (t1 - t0);
  return ys[hi - 1] + w * (ys[hi] - ys[hi - 1]);
}

LeaderTrajectory from_speeds(double T, std::vector<double> speed) {
  LeaderTrajectory out;
  out.T = T;
  out.accel.resize(speed.size(), 0.0);
  for (std::size_t k = 0; k + 1 < speed.size(); ++k) {
    out.accel[k] = (speed[k + 1] - speed[k]) / T;
  }
  out.speed = std::move(speed);
  return out;
}

}  // namespace

LeaderTrajectory load_leader_trajectory(const std::string& path, double T,
                                        double v0) {
  check_step(T);
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path + ": cannot open trajectory file");
  }

  std::string raw;
  int line_no = 0;
  std::string header;
  while (std::getline(in, raw)) {
    ++line_no;
    header = trimmed(raw);
    if (!header.empty()) break;
  }
  bool speeds = false;
  if (header == "t,v") {
    speeds = true;
  } else if (header == "t,a") {
    speeds = false;
  } else {
    throw ParseError(path + ":" + std::to_string(line_no) +
                     ": expected header 't,v' or 't,a'");
  }

  std::vector<double> ts;
  std::vector<double> ys;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trimmed(raw);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos ||
        line.find(',', comma + 1) != std::string::npos) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected two comma-separated columns");
    }
    const double t = parse_number(trimmed(line.substr(0, comma)), path, line_no);
    const double y =
        parse_number(trimmed(line.substr(comma + 1)), path, line_no);
    if (!ts.empty() && t <= ts.back()) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": time not strictly increasing");
    }
    ts.push_back(t);
    ys.push_back(y);
  }
  if (ts.size() < 2) {
    throw ParseError(path + ":" + std::to_string(line_no) +
                     ": need at least two samples");
  }

  const double span = ts.back() - ts.front();
  const long n_steps = static_cast<long>(std::floor(span / T + 1e-9));
  if (n_steps < 1) {
    throw ParseError(path + ":" + std::to_string(line_no) +
                     ": trajectory shorter than one time step");
  }

  std::vector<double> resampled(static_cast<std::size_t>(n_steps) + 1);
  for (long k = 0; k <= n_steps; ++k) {
    const double t = std::min(ts.front() + k * T, ts.back());
    resampled[static_cast<std::size_t>(k)] = interp(ts, ys, t);
  }

  if (speeds) {
    return from_speeds(T, std::move(resampled));
  }
  LeaderTrajectory out;
  out.T = T;
  out.accel = std::move(resampled);
  out.accel.back() = 0.0;
  out.speed.resize(out.accel.size());
  out.speed[0] = v0;
  for (std::size_t k = 0; k + 1 < out.speed.size(); ++k) {
    out.speed[k + 1] = out.speed[k] + out.accel[k] * T;
  }
  return out;
}

LeaderTrajectory synthetic_sine_leader(double T, double duration) {
  check_step(T);
  const long n_steps = std::lround(duration / T);
  std::vector<double> speed(static_cast<std::size_t>(n_steps) + 1);
  const double two_pi = 6.283185307179586476925286766559;
  for (long k = 0; k <= n_steps; ++k) {
    const double t = k * T;
    double v = 25.0 + 2.0 * std::sin(two_pi * 0.05 * t);
    if (t >= 120.0) v -= 2.0;
    speed[static_cast<std::size_t>(k)] = v;
  }
  return from_speeds(T, std::move(speed));
}

LeaderTrajectory synthetic_step_leader(double T, double duration, double v0,
                                       double dv, double t_step) {
  check_step(T);
  const long n_steps = std::lround(duration / T);
  std::vector<double> speed(static_cast<std::size_t>(n_steps) + 1);
  for (long k = 0; k <= n_steps; ++k) {
    speed[static_cast<std::size_t>(k)] = v0 + (k * T >= t_step ? dv : 0.0);
  }
  return from_speeds(T, std::move(speed));
}

LeaderTrajectory synthetic_constant_leader(double T, double duration,
                                           double v0) {
  check_step(T);
  const long n_steps = std::lround(duration / T);
  LeaderTrajectory out;
  out.T = T;
  out.speed.assign(static_cast<std::size_t>(n_steps) + 1, v0);
  out.accel.assign(static_cast<std::size_t>(n_steps) + 1, 0.0);
  return out;
}

LeaderTrajectory constant_accel_leader(double T, double duration, double v0,
                                       double a) {
  check_step(T);
  const long n_steps = std::lround(duration / T);
  LeaderTrajectory out;
  out.T = T;
  out.accel.assign(static_cast<std::size_t>(n_steps) + 1, a);
  out.accel.back() = 0.0;
  out.speed.resize(static_cast<std::size_t>(n_steps) + 1);
  out.speed[0] = v0;
  for (std::size_t k = 0; k + 1 < out.speed.size(); ++k) {
    out.speed[k + 1] = out.speed[k] + out.accel[k] * T;
  }
  return out;
}

}  // namespace cacc
