#ifndef AUTOTUNE_TRACE_HPP
#define AUTOTUNE_TRACE_HPP

#include <vector>

namespace autotune {

// Time-stamped yaw samples from one simulated rotation. Sample i was taken
// at time i*dt_ms; commands[i] is the torque applied during [i, i+1)*dt_ms,
// so commands has one entry fewer than samples.
struct ExperimentTrace {
  int dt_ms = 100;
  double setpoint = 90.0;
  std::vector<double> samples;
  std::vector<double> commands;

  int duration_ms() const {
    return static_cast<int>(samples.size() - 1) * dt_ms;
  }
};

}  // namespace autotune

#endif
