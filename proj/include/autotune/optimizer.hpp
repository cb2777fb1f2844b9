#ifndef AUTOTUNE_OPTIMIZER_HPP
#define AUTOTUNE_OPTIMIZER_HPP

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "autotune/pid.hpp"
#include "autotune/rng.hpp"

namespace autotune {

// Axis-aligned search box over (kp, ki, kd).
struct GainBounds {
  GainVector lo{1.0, 0.0, 0.0};
  GainVector hi{25.0, 1.0, 1.0};

  std::array<double, 3> lo_array() const { return {lo.kp, lo.ki, lo.kd}; }
  std::array<double, 3> hi_array() const { return {hi.kp, hi.ki, hi.kd}; }

  bool contains(const GainVector& g) const {
    return g.kp >= lo.kp && g.kp <= hi.kp && g.ki >= lo.ki && g.ki <= hi.ki &&
           g.kd >= lo.kd && g.kd <= hi.kd;
  }

  GainVector clip(GainVector g) const;
  GainVector sample_uniform(Rng& rng) const;

  // Map to/from the unit cube (used by the GP surrogate).
  std::array<double, 3> normalize(const GainVector& g) const;
  GainVector denormalize(const std::array<double, 3>& u) const;
};

// One objective evaluation as seen by an optimizer: a scalar to minimize plus
// the caller's convergence verdict for this candidate.
struct ObjectiveSample {
  double fitness = 0.0;
  bool converged = false;
};

using Objective = std::function<ObjectiveSample(const GainVector&)>;

struct EvalRecord {
  GainVector gains;
  double fitness = 0.0;
  bool improved_best = false;
};

struct OptRun {
  GainVector best_gains;
  double best_fitness = 0.0;
  bool converged = false;
  int eval_count = 0;
  std::vector<EvalRecord> history;
};

// Raised when the objective returns a non-finite fitness; carries the
// offending gains in the message.
class ObjectiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace autotune

#endif
