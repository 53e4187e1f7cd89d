#pragma once

#include <vector>

#include "cacc/comm.hpp"
#include "cacc/control.hpp"
#include "cacc/poly.hpp"

namespace cacc {

// Rational function of s with real coefficients, ascending degree.
// Common factors of s shared by numerator and denominator are cancelled
// by the arithmetic helpers, so functions built from 1/s^2 stay proper.
struct TransferFunction {
  Poly num{1.0};
  Poly den{1.0};
};

TransferFunction tf_add(const TransferFunction& a, const TransferFunction& b);
TransferFunction tf_mul(const TransferFunction& a, const TransferFunction& b);
// Throws std::domain_error when b's numerator is identically zero.
TransferFunction tf_div(const TransferFunction& a, const TransferFunction& b);
TransferFunction tf_add_const(const TransferFunction& a, double c);

// Log-spaced frequency grid, inclusive of both endpoints (rad/s).
struct FrequencyGrid {
  double omega_min = 1e-3;
  double omega_max = 1e3;
  int n_points = 4096;

  std::vector<double> omegas() const;

  bool operator==(const FrequencyGrid&) const = default;
};

struct HInfResult {
  double norm = 0.0;          // sup over omega of |TF(j*omega)|
  double argmax_omega = 0.0;  // rad/s
  bool string_stable = false; // norm <= 1 + 1e-9
};

// Worst-case per-hop string-stability response for one mode, built by
// polynomial arithmetic from the plant 1/s^2, PD law omega_k*(omega_k + s),
// spacing polynomial 1 + h_d*s, and feedforward lag 1/(1 + h_d*s).
// CACC2/CACC3 reduce to 1/(1 + h_d*s); ACC has no feedforward path.
// Throws cacc::ConfigError on non-positive parameters.
TransferFunction build_ss(Mode mode, double omega_k, double h_d);

// |num(j*omega)| / |den(j*omega)|; +infinity on a pole.
double magnitude(const TransferFunction& tf, double omega);

// Sup of |TF(j*omega)| over the grid, with golden-section refinement of the
// bracketing interval to relative frequency resolution 1e-8. A pole on the
// swept axis yields norm = +infinity and string_stable = false.
HInfResult hinf_norm(const TransferFunction& tf,
                     const FrequencyGrid& grid = {});

// Closed-form string-stability region for the mode:
// CACC1: omega_k*h_d >= (sqrt(5)-1)/2; CACC2/CACC3: h_d > 0;
// ACC: omega_k*h_d >= sqrt(2).
bool region_check(Mode mode, double omega_k, double h_d);

// True head-to-tail magnitude |X_tail / X_leader|(j*omega) of a platoon
// under a fixed topology, propagating each vehicle's response along the
// chain instead of the per-hop worst-case relaxation. links[i-1] holds
// follower i's indicators; the scheme maps them to modes exactly like the
// simulator. Returns one magnitude per grid frequency.
std::vector<double> chain_magnitudes(const GainsTable& table, Scheme scheme,
                                     const std::vector<LinkState>& links,
                                     const std::vector<double>& omegas);

}  // namespace cacc
