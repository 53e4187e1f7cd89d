#include "cacc/dynamics.hpp"

#include <cmath>

#include "cacc/errors.hpp"

namespace cacc {

VehicleState step_plant(const VehicleState& state, double u, double dt,
                        Integrator integrator) {
  if (!std::isfinite(state.position) || !std::isfinite(state.velocity)) {
    throw SimError("step_plant: non-finite vehicle state");
  }
  if (!std::isfinite(u)) {
    throw SimError("step_plant: non-finite acceleration command");
  }
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw SimError("step_plant: time step must be finite and positive");
  }

  VehicleState next = state;
  switch (integrator) {
    case Integrator::Zoh:
      next.position = state.position + state.velocity * dt + 0.5 * u * dt * dt;
      break;
    case Integrator::Euler:
      next.position = state.position + state.velocity * dt;
      break;
  }
  next.velocity = state.velocity + u * dt;
  next.accel_cmd = u;
  return next;
}

}  // namespace cacc
