#ifndef AUTOTUNE_PLANT_HPP
#define AUTOTUNE_PLANT_HPP

#include <cstdint>

#include "autotune/pid.hpp"
#include "autotune/trace.hpp"

namespace autotune {

// Dimensionless second-order yaw model: inertia + viscous damping with
// torque saturation at +-command_limit.
struct PlantParams {
  double inertia = 0.3;
  double damping = 0.5;
  double command_limit = 100.0;
  double noise_std = 0.0;  // yaw measurement noise, degrees

  // Throws std::invalid_argument on a violated invariant.
  void validate() const;
};

struct PlantState {
  double theta = 0.0;  // yaw, degrees
  double omega = 0.0;  // yaw rate, degrees/second
};

struct ExperimentParams {
  double setpoint = 90.0;
  int duration_ms = 5000;
  int dt_ms = 100;
  double abort_angle = 120.0;

  void validate() const;
};

// One explicit-Euler step with command saturation. theta advances with the
// pre-update omega. Throws std::domain_error on a non-finite input state.
PlantState step(const PlantState& state, double command,
                const PlantParams& params, double dt);

// Closed-loop 90-degree rotation: PID on the measured yaw error at every
// dt_ms tick. Exceeding abort_angle does not abort; metrics judge the trace
// afterwards. Deterministic for a given seed.
ExperimentTrace run_experiment(const GainVector& gains, const PlantParams& plant,
                               const ExperimentParams& exp, std::uint64_t rng_seed);

}  // namespace autotune

#endif
