#pragma once

namespace cacc {

// Discretization used to advance the double-integrator vehicle model.
//   Zoh:   exact zero-order hold; position picks up the half-step
//          acceleration term within the interval.
//   Euler: forward Euler; position advances with the old velocity only.
enum class Integrator { Zoh, Euler };

// Longitudinal state of one vehicle plus its controller memory.
// All quantities are SI (m, m/s, m/s^2).
//   accel_cmd   command applied during the step that produced this state
//               (after actuator clamping); 0 before the first step.
//   ff_state_1  feedforward filter state fed by the first predecessor.
//   ff_state_2  feedforward filter state fed by the second predecessor.
struct VehicleState {
  double position = 0.0;
  double velocity = 0.0;
  double accel_cmd = 0.0;
  double ff_state_1 = 0.0;
  double ff_state_2 = 0.0;
};

// Advances a vehicle one step of length dt under constant commanded
// acceleration u. Feedforward filter states pass through unchanged; the
// applied command is recorded in the result. Throws cacc::SimError if the
// input state, u, or dt is non-finite, or dt <= 0.
VehicleState step_plant(const VehicleState& state, double u, double dt,
                        Integrator integrator = Integrator::Zoh);

}  // namespace cacc
