#include "autotune/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace autotune {

std::optional<double> rise_time(const ExperimentTrace& trace) {
  const double threshold = 0.9 * trace.setpoint;
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    if (trace.samples[i] >= threshold)
      return static_cast<double>(i) * trace.dt_ms;
  }
  return std::nullopt;
}

double overshoot_pct(const ExperimentTrace& trace) {
  double peak = *std::max_element(trace.samples.begin(), trace.samples.end());
  return std::max(0.0, (peak - trace.setpoint) / trace.setpoint * 100.0);
}

std::optional<double> settling_time(const ExperimentTrace& trace) {
  const double lo = 0.95 * trace.setpoint;
  const double hi = 1.05 * trace.setpoint;

  // Scan backwards for the start of the final in-band run.
  std::optional<std::size_t> first_settled;
  for (std::size_t i = trace.samples.size(); i-- > 0;) {
    if (trace.samples[i] >= lo && trace.samples[i] <= hi)
      first_settled = i;
    else
      break;
  }
  if (!first_settled) return std::nullopt;
  return static_cast<double>(*first_settled) * trace.dt_ms;
}

double steady_state_error(const ExperimentTrace& trace) {
  if (trace.samples.size() < 5)
    throw std::invalid_argument(
        "steady_state_error: trace needs at least 5 samples");
  double tail = std::accumulate(trace.samples.end() - 5, trace.samples.end(), 0.0);
  return trace.setpoint - tail / 5.0;
}

StepMetrics compute_metrics(const ExperimentTrace& trace) {
  StepMetrics m;
  m.rise_time_ms = rise_time(trace);
  m.overshoot_pct = overshoot_pct(trace);
  m.settling_time_ms = settling_time(trace);
  m.steady_state_error_deg = steady_state_error(trace);
  return m;
}

Evaluation evaluate(const ExperimentTrace& trace, const Constraints& constraints,
                    double objective_threshold_ms) {
  Evaluation ev;
  ev.metrics = compute_metrics(trace);

  int violations = 0;
  if (ev.metrics.overshoot_pct > constraints.max_overshoot_pct) ++violations;
  if (!ev.metrics.rise_time_ms ||
      *ev.metrics.rise_time_ms > constraints.max_rise_time_ms)
    ++violations;
  if (!ev.metrics.settling_time_ms) ++violations;

  ev.accepted = violations == 0;
  if (ev.accepted) {
    ev.fitness = *ev.metrics.settling_time_ms;
    ev.converged = ev.fitness <= objective_threshold_ms;
  } else {
    ev.fitness = trace.duration_ms() + 1000.0 * violations;
    ev.converged = false;
  }
  return ev;
}

}  // namespace autotune
