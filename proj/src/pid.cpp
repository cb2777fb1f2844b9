#include "autotune/pid.hpp"

#include <cassert>

namespace autotune {

PidOutput pid_step(const PidState& state, double error, const GainVector& gains,
                   double dt) {
  assert(dt > 0.0);

  PidState next = state;
  next.integral_acc += error * dt;

  double derivative = 0.0;
  if (state.prev_error.has_value()) {
    derivative = (error - *state.prev_error) / dt;
  }
  next.prev_error = error;

  double command =
      gains.kp * error + gains.ki * next.integral_acc + gains.kd * derivative;
  return {command, next};
}

}  // namespace autotune
