#ifndef AUTOTUNE_DE_HPP
#define AUTOTUNE_DE_HPP

#include <cstdint>
#include <vector>

#include "autotune/optimizer.hpp"

namespace autotune {

struct DeConfig {
  double mutation_f = 0.6;    // in (0, 2]
  double crossover_cr = 0.6;  // in [0, 1]
  int pop_size = 15;
  int budget = 150;  // max objective evaluations
  double tol = 0.0;  // 0 disables the population-spread stop
  double atol = 0.0;

  void validate() const;
};

struct Population {
  std::vector<GainVector> members;
  std::vector<double> fitnesses;
  int eval_count = 0;
};

// rand/1 donor: x_r1 + f*(x_r2 - x_r3) with r1,r2,r3 distinct and != target,
// clipped to the box. Throws std::invalid_argument below 4 members.
GainVector mutate_rand1(const Population& pop, int target_idx, double f,
                        const GainBounds& bounds, Rng& rng);

// Binomial crossover: each dimension takes the donor gene with probability cr;
// one rng-chosen dimension always comes from the donor.
GainVector crossover_bin(const GainVector& target, const GainVector& donor,
                         double cr, Rng& rng);

// rand/1/bin DE, minimizing. Population member 0 is the trial's initial state,
// the rest uniform in bounds. Evaluations are strictly sequential; greedy
// selection; stops at the first objective-reported convergence or at budget
// (mid-generation stops allowed).
OptRun de_run(const Objective& objective, const GainBounds& bounds,
              const DeConfig& config, const GainVector& initial_state,
              std::uint64_t seed);

}  // namespace autotune

#endif
