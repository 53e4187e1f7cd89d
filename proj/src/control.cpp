#include "cacc/control.hpp"

#include <stdexcept>

#include "cacc/errors.hpp"

namespace cacc {

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::Cacc1: return "cacc1";
    case Mode::Cacc2: return "cacc2";
    case Mode::Cacc3: return "cacc3";
    case Mode::Acc: return "acc";
  }
  return "?";
}

const char* mode_label(Mode mode) {
  switch (mode) {
    case Mode::Cacc1: return "CACC1";
    case Mode::Cacc2: return "CACC2";
    case Mode::Cacc3: return "CACC3";
    case Mode::Acc: return "ACC";
  }
  return "?";
}

Mode mode_of(const ControllerGains& gains) {
  if (gains.alpha) {
    return gains.beta ? Mode::Cacc1 : Mode::Cacc2;
  }
  return gains.beta ? Mode::Cacc3 : Mode::Acc;
}

const ControllerGains& GainsTable::row(Mode mode) const {
  switch (mode) {
    case Mode::Cacc1: return cacc1;
    case Mode::Cacc2: return cacc2;
    case Mode::Cacc3: return cacc3;
    case Mode::Acc: return acc;
  }
  throw std::invalid_argument("GainsTable::row: bad mode");
}

ControllerGains& GainsTable::row(Mode mode) {
  return const_cast<ControllerGains&>(
      static_cast<const GainsTable*>(this)->row(mode));
}

double spacing_error(const ControlInputs& inputs,
                     const ControllerGains& gains) {
  return inputs.x_pred - inputs.x_self - gains.h_d * inputs.v_self - inputs.L;
}

double spacing_error_rate(const ControlInputs& inputs,
                          const ControllerGains& gains) {
  return inputs.v_pred - inputs.v_self - gains.h_d * inputs.u_self_prev;
}

double feedforward_step(double ff_state, bool gate, double u_pred_prev,
                        double T, double h_d) {
  if (!(T > 0.0) || !(h_d > 0.0) || T >= h_d) {
    throw ConfigError("explicit filter update unstable: requires 0 < T < h_d");
  }
  const double input = gate ? u_pred_prev : 0.0;
  return ff_state + (T / h_d) * (input - ff_state);
}

CommandResult control_command(const ControlInputs& inputs,
                              const ControllerGains& gains,
                              const VehicleState& state, double T,
                              const ActuatorLimits& limits) {
  const bool gate1 = gains.alpha && inputs.u_pred1_prev.has_value();
  const bool gate2 = gains.beta && inputs.u_pred2_prev.has_value();
  CommandResult out;
  out.ff_1 = feedforward_step(state.ff_state_1, gate1,
                              inputs.u_pred1_prev.value_or(0.0), T, gains.h_d);
  out.ff_2 = feedforward_step(state.ff_state_2, gate2,
                              inputs.u_pred2_prev.value_or(0.0), T, gains.h_d);
  const double e = spacing_error(inputs, gains);
  const double edot = spacing_error_rate(inputs, gains);
  double u = gains.omega_k * gains.omega_k * e + gains.omega_k * edot +
             out.ff_1 + out.ff_2;
  if (limits.u_min && u < *limits.u_min) u = *limits.u_min;
  if (limits.u_max && u > *limits.u_max) u = *limits.u_max;
  out.u = u;
  return out;
}

const ControllerGains& select_mode(bool alpha, bool beta, int vehicle_index,
                                   Scheme scheme, const GainsTable& table) {
  if (vehicle_index < 1) {
    throw std::invalid_argument("select_mode: vehicle_index must be >= 1");
  }
  const bool single_pred = vehicle_index == 1;
  if (scheme == Scheme::Fift) {
    const bool full = alpha && (beta || single_pred);
    if (!full) return table.acc;
    return single_pred ? table.cacc2 : table.cacc1;
  }
  if (single_pred) {
    return alpha ? table.cacc2 : table.acc;
  }
  if (alpha) {
    return beta ? table.cacc1 : table.cacc2;
  }
  return beta ? table.cacc3 : table.acc;
}

}  // namespace cacc
