#include "autotune/plant.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "autotune/rng.hpp"

namespace autotune {

void PlantParams::validate() const {
  if (!(inertia > 0.0)) throw std::invalid_argument("plant: inertia must be > 0");
  if (!(command_limit > 0.0))
    throw std::invalid_argument("plant: command_limit must be > 0");
  if (!(damping >= 0.0)) throw std::invalid_argument("plant: damping must be >= 0");
  if (!(noise_std >= 0.0))
    throw std::invalid_argument("plant: noise_std must be >= 0");
}

void ExperimentParams::validate() const {
  if (dt_ms <= 0) throw std::invalid_argument("experiment: dt_ms must be > 0");
  if (duration_ms <= 0 || duration_ms % dt_ms != 0)
    throw std::invalid_argument(
        "experiment: duration_ms must be a positive multiple of dt_ms");
  if (!(setpoint > 0.0 && setpoint < abort_angle))
    throw std::invalid_argument(
        "experiment: setpoint must lie in (0, abort_angle)");
}

PlantState step(const PlantState& state, double command,
                const PlantParams& params, double dt) {
  if (!std::isfinite(state.theta) || !std::isfinite(state.omega))
    throw std::domain_error("plant: simulation diverged (non-finite state)");

  double u = std::clamp(command, -params.command_limit, params.command_limit);
  PlantState next;
  next.omega = state.omega + dt * (u - params.damping * state.omega) / params.inertia;
  next.theta = state.theta + dt * state.omega;
  return next;
}

ExperimentTrace run_experiment(const GainVector& gains, const PlantParams& plant,
                               const ExperimentParams& exp,
                               std::uint64_t rng_seed) {
  plant.validate();
  exp.validate();

  const int ticks = exp.duration_ms / exp.dt_ms;
  const double dt = exp.dt_ms / 1000.0;

  Rng noise_rng = make_rng(rng_seed, "plant-noise");
  std::normal_distribution<double> noise(0.0, 1.0);

  auto measure = [&](double theta) {
    return plant.noise_std > 0.0 ? theta + plant.noise_std * noise(noise_rng)
                                 : theta;
  };

  ExperimentTrace trace;
  trace.dt_ms = exp.dt_ms;
  trace.setpoint = exp.setpoint;
  trace.samples.reserve(static_cast<std::size_t>(ticks) + 1);
  trace.commands.reserve(static_cast<std::size_t>(ticks));

  PlantState state;
  PidState pid;
  double measured = measure(state.theta);
  trace.samples.push_back(measured);

  for (int i = 0; i < ticks; ++i) {
    double error = exp.setpoint - measured;
    auto [command, next_pid] = pid_step(pid, error, gains, dt);
    pid = next_pid;

    double applied = std::clamp(command, -plant.command_limit, plant.command_limit);
    trace.commands.push_back(applied);

    state = step(state, command, plant, dt);
    measured = measure(state.theta);
    trace.samples.push_back(measured);
  }
  return trace;
}

}  // namespace autotune
