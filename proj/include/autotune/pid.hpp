#ifndef AUTOTUNE_PID_HPP
#define AUTOTUNE_PID_HPP

#include <optional>

namespace autotune {

// Candidate PID gains. When used as an optimizer candidate the search box
// is Kp in [1,25], Ki in [0,1], Kd in [0,1].
struct GainVector {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;

  friend bool operator==(const GainVector&, const GainVector&) = default;
};

// Controller state carried between samples. prev_error is unset before the
// first sample, so the first derivative term is zero.
struct PidState {
  double integral_acc = 0.0;
  std::optional<double> prev_error;
};

struct PidOutput {
  double command = 0.0;
  PidState state;
};

// Positional-form discrete PID: command = kp*e + ki*I' + kd*(e - e_prev)/dt
// with I' = I + e*dt. No anti-windup clamp.
PidOutput pid_step(const PidState& state, double error, const GainVector& gains,
                   double dt);

}  // namespace autotune

#endif
