#include "cacc/stability.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cacc/errors.hpp"

namespace cacc {

namespace {

bool is_zero_poly(const Poly& p) {
  for (double c : p) {
    if (c != 0.0) return false;
  }
  return true;
}

// Cancels factors of s common to numerator and denominator so that
// responses assembled from 1/s^2 end up in reduced rational form.
TransferFunction reduce(Poly num, Poly den) {
  while (num.size() > 1 && den.size() > 1 && num.front() == 0.0 &&
         den.front() == 0.0) {
    num.erase(num.begin());
    den.erase(den.begin());
  }
  num = poly_trim(std::move(num));
  den = poly_trim(std::move(den));
  if (is_zero_poly(den)) {
    throw std::domain_error("transfer function with zero denominator");
  }
  return {std::move(num), std::move(den)};
}

}  // namespace

TransferFunction tf_add(const TransferFunction& a, const TransferFunction& b) {
  return reduce(poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
                poly_mul(a.den, b.den));
}

TransferFunction tf_mul(const TransferFunction& a, const TransferFunction& b) {
  return reduce(poly_mul(a.num, b.num), poly_mul(a.den, b.den));
}

TransferFunction tf_div(const TransferFunction& a, const TransferFunction& b) {
  if (is_zero_poly(b.num)) {
    throw std::domain_error("division by zero transfer function");
  }
  return reduce(poly_mul(a.num, b.den), poly_mul(a.den, b.num));
}

TransferFunction tf_add_const(const TransferFunction& a, double c) {
  return reduce(poly_add(a.num, poly_scale(a.den, c)), a.den);
}

std::vector<double> FrequencyGrid::omegas() const {
  if (!(omega_min > 0.0) || !(omega_max > omega_min) || n_points < 2) {
    throw ConfigError(
        "frequency grid requires 0 < omega_min < omega_max and >= 2 points");
  }
  std::vector<double> out(static_cast<std::size_t>(n_points));
  const double lo = std::log10(omega_min);
  const double hi = std::log10(omega_max);
  for (int i = 0; i < n_points; ++i) {
    out[static_cast<std::size_t>(i)] =
        std::pow(10.0, lo + (hi - lo) * i / (n_points - 1));
  }
  return out;
}

TransferFunction build_ss(Mode mode, double omega_k, double h_d) {
  if (!(omega_k > 0.0) || !(h_d > 0.0)) {
    throw ConfigError("build_ss: omega_k and h_d must be positive");
  }
  if (mode == Mode::Cacc2 || mode == Mode::Cacc3) {
    return {{1.0}, {1.0, h_d}};
  }
  const TransferFunction plant{{1.0}, {0.0, 0.0, 1.0}};        // 1/s^2
  const TransferFunction pd{{omega_k * omega_k, omega_k}, {1.0}};
  const TransferFunction spacing{{1.0, h_d}, {1.0}};
  const TransferFunction loop = tf_mul(tf_mul(plant, pd), spacing);
  if (mode == Mode::Acc) {
    return tf_div(tf_mul(plant, pd), tf_add_const(loop, 1.0));
  }
  // CACC1 worst case: both neighbors assumed at the leader's amplitude.
  return tf_div(tf_add_const(loop, 2.0),
                tf_mul(spacing, tf_add_const(loop, 1.0)));
}

double magnitude(const TransferFunction& tf, double omega) {
  const std::complex<double> s{0.0, omega};
  const double den_mag = std::abs(poly_eval(tf.den, s));
  if (den_mag == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(poly_eval(tf.num, s)) / den_mag;
}

HInfResult hinf_norm(const TransferFunction& tf, const FrequencyGrid& grid) {
  const std::vector<double> omegas = grid.omegas();
  const std::size_t n = omegas.size();
  double best = -1.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = magnitude(tf, omegas[i]);
    if (std::isinf(mag)) {
      return {mag, omegas[i], false};
    }
    if (mag > best) {
      best = mag;
      best_i = i;
    }
  }

  // Golden-section refinement on log(omega) within the bracketing interval.
  double lo = std::log(omegas[best_i > 0 ? best_i - 1 : best_i]);
  double hi = std::log(omegas[best_i + 1 < n ? best_i + 1 : best_i]);
  double best_t = std::log(omegas[best_i]);
  auto eval = [&](double t) { return magnitude(tf, std::exp(t)); };
  const double inv_phi = 0.6180339887498949;
  double c = hi - (hi - lo) * inv_phi;
  double d = lo + (hi - lo) * inv_phi;
  double fc = eval(c);
  double fd = eval(d);
  while (hi - lo > 1e-8) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - (hi - lo) * inv_phi;
      fc = eval(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + (hi - lo) * inv_phi;
      fd = eval(d);
    }
    const double t = fc > fd ? c : d;
    const double f = fc > fd ? fc : fd;
    if (f > best) {
      best = f;
      best_t = t;
    }
  }

  HInfResult out;
  out.norm = best;
  out.argmax_omega = std::exp(best_t);
  out.string_stable = best <= 1.0 + 1e-9;
  return out;
}

bool region_check(Mode mode, double omega_k, double h_d) {
  switch (mode) {
    case Mode::Cacc1:
      return omega_k * h_d >= (std::sqrt(5.0) - 1.0) / 2.0;
    case Mode::Cacc2:
    case Mode::Cacc3:
      return h_d > 0.0;
    case Mode::Acc:
      return omega_k * h_d >= std::sqrt(2.0);
  }
  return false;
}

std::vector<double> chain_magnitudes(const GainsTable& table, Scheme scheme,
                                     const std::vector<LinkState>& links,
                                     const std::vector<double>& omegas) {
  const int n_followers = static_cast<int>(links.size());
  std::vector<double> out;
  out.reserve(omegas.size());
  for (const double omega : omegas) {
    const std::complex<double> s{0.0, omega};
    const std::complex<double> s2 = s * s;
    // Responses relative to the leader: X[i] = X_i / X_0.
    std::complex<double> x_prev2{1.0, 0.0};  // X_{i-2}
    std::complex<double> x_prev1{1.0, 0.0};  // X_{i-1}; X_0 = 1
    for (int i = 1; i <= n_followers; ++i) {
      const LinkState& ls = links[static_cast<std::size_t>(i - 1)];
      const ControllerGains& g = select_mode(ls.alpha, ls.beta, i, scheme, table);
      const std::complex<double> pd = g.omega_k * (g.omega_k + s);
      const std::complex<double> spacing = 1.0 + g.h_d * s;
      const std::complex<double> closed = 1.0 + pd * spacing / s2;
      const std::complex<double> lag_fwd = (1.0 / spacing) / closed;
      const std::complex<double> lag_back = (pd / s2) / closed;
      const bool gate1 = g.alpha;
      const bool gate2 = g.beta && i >= 2;
      const std::complex<double> x_i =
          (gate2 ? lag_fwd * x_prev2 : 0.0) +
          ((gate1 ? lag_fwd : 0.0) + lag_back) * x_prev1;
      x_prev2 = x_prev1;
      x_prev1 = x_i;
    }
    out.push_back(std::abs(x_prev1));
  }
  return out;
}

}  // namespace cacc
