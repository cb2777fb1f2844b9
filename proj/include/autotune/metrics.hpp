#ifndef AUTOTUNE_METRICS_HPP
#define AUTOTUNE_METRICS_HPP

#include <optional>

#include "autotune/trace.hpp"

namespace autotune {

struct StepMetrics {
  std::optional<double> rise_time_ms;
  double overshoot_pct = 0.0;
  std::optional<double> settling_time_ms;
  double steady_state_error_deg = 0.0;
};

struct Constraints {
  double max_overshoot_pct = 30.0;
  double max_rise_time_ms = 1000.0;
};

struct Evaluation {
  bool accepted = false;
  bool converged = false;  // accepted and settling <= objective threshold
  double fitness = 0.0;    // settling time, or penalty when rejected
  StepMetrics metrics;
};

// Time of the first sample at or above 90% of the setpoint.
std::optional<double> rise_time(const ExperimentTrace& trace);

// Peak excess over the setpoint, percent of setpoint, clamped at 0.
double overshoot_pct(const ExperimentTrace& trace);

// Earliest time T such that every sample from T onward stays within
// +-5% of the setpoint (closed band). Absent if the final sample is outside.
std::optional<double> settling_time(const ExperimentTrace& trace);

// setpoint minus the mean of the final 5 samples (signed). Throws
// std::invalid_argument on traces shorter than 5 samples.
double steady_state_error(const ExperimentTrace& trace);

StepMetrics compute_metrics(const ExperimentTrace& trace);

// Constraint gate: accepted iff overshoot within bound, rise time present and
// within bound, and settling time present. Rejected candidates get fitness
// duration_ms + 1000 per violated condition so they rank strictly worse than
// any accepted candidate and fewer violations rank better.
Evaluation evaluate(const ExperimentTrace& trace, const Constraints& constraints,
                    double objective_threshold_ms);

}  // namespace autotune

#endif
