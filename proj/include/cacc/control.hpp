#pragma once

#include <optional>

#include "cacc/dynamics.hpp"

namespace cacc {

// Controller modes, in order of information richness: CACC1 uses both
// predecessors' accelerations, CACC2 only the first, CACC3 only the
// second, ACC neither.
enum class Mode { Cacc1, Cacc2, Cacc3, Acc };

// Topology-handling schemes. Dift switches each follower independently
// among the four modes from its current link states; Fift runs the full
// CACC mode only while every configured link works and otherwise degrades
// the follower to ACC.
enum class Scheme { Dift, Fift };

// Lowercase identifier used in CSV output ("cacc1" ... "acc").
const char* mode_name(Mode mode);
// Uppercase label used in messages ("CACC1" ... "ACC").
const char* mode_label(Mode mode);

// One mode's parameters: PD cut-off frequency, desired time headway, and
// the (alpha, beta) gates saying which predecessor accelerations feed the
// two feedforward filters while this mode is active.
struct ControllerGains {
  double omega_k = 0.8;  // rad/s
  double h_d = 1.0;      // s
  bool alpha = false;
  bool beta = false;

  bool operator==(const ControllerGains&) const = default;
};

// The mode a gains row encodes, read off its (alpha, beta) gates.
Mode mode_of(const ControllerGains& gains);

// Gains row per mode. Defaults: CACC1 (0.8, 1), CACC2 (0.8, 1),
// CACC3 (0.9, 1), ACC (1.45, 1).
struct GainsTable {
  ControllerGains cacc1{0.8, 1.0, true, true};
  ControllerGains cacc2{0.8, 1.0, true, false};
  ControllerGains cacc3{0.9, 1.0, false, true};
  ControllerGains acc{1.45, 1.0, false, false};

  const ControllerGains& row(Mode mode) const;
  ControllerGains& row(Mode mode);

  bool operator==(const GainsTable&) const = default;
};

// Previous-step quantities a follower reads to compute its command.
// u_pred1_prev / u_pred2_prev are present only when the corresponding
// link delivered them this step.
struct ControlInputs {
  double x_pred = 0.0;
  double v_pred = 0.0;
  double x_self = 0.0;
  double v_self = 0.0;
  double u_self_prev = 0.0;
  std::optional<double> u_pred1_prev;
  std::optional<double> u_pred2_prev;
  double L = 5.0;  // m; standstill gap / vehicle length constant
};

// Optional actuator saturation; absent bounds leave the command unclamped.
struct ActuatorLimits {
  std::optional<double> u_min;
  std::optional<double> u_max;

  bool operator==(const ActuatorLimits&) const = default;
};

struct CommandResult {
  double u = 0.0;     // applied command, after any clamping
  double ff_1 = 0.0;  // next feedforward filter states
  double ff_2 = 0.0;
};

// Constant-time-headway spacing error: x_pred - x_self - h_d*v_self - L.
double spacing_error(const ControlInputs& inputs, const ControllerGains& gains);

// Spacing-error rate from previous-step quantities:
// v_pred - v_self - h_d*u_self_prev (the applied, post-clamp command).
double spacing_error_rate(const ControlInputs& inputs,
                          const ControllerGains& gains);

// One forward-Euler update of the first-order feedforward lag with time
// constant h_d: state + (T/h_d)*(gate*u_pred_prev - state). The returned
// value is both the stored state and the filter's contribution to the
// command. The filter keeps running when the gate is off (input 0), so a
// dropped link decays the contribution instead of freezing it.
// Requires T < h_d; throws cacc::ConfigError
// ("explicit filter update unstable") otherwise.
double feedforward_step(double ff_state, bool gate, double u_pred_prev,
                        double T, double h_d);

// Full command for one follower: advances both feedforward filters, then
// u = omega_k^2*e + omega_k*edot + ff_1 + ff_2, clamped to the actuator
// limits if configured. Filter gates are the gains row's (alpha, beta)
// flags and open only when the corresponding predecessor command is
// actually present.
CommandResult control_command(const ControlInputs& inputs,
                              const ControllerGains& gains,
                              const VehicleState& state, double T,
                              const ActuatorLimits& limits = {});

// Picks the active gains row for follower `vehicle_index` (>= 1) from its
// link indicators. Dift maps (alpha, beta) onto the four rows; follower 1,
// having a single predecessor, switches between CACC2 and ACC only.
// Fift returns the full-CACC row (CACC1, or CACC2 for follower 1) when all
// configured links work, else ACC.
const ControllerGains& select_mode(bool alpha, bool beta, int vehicle_index,
                                   Scheme scheme, const GainsTable& table);

}  // namespace cacc
