#include "autotune/de.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace autotune {

void DeConfig::validate() const {
  if (!(mutation_f > 0.0 && mutation_f <= 2.0))
    throw std::invalid_argument("de: mutation_f must be in (0, 2]");
  if (!(crossover_cr >= 0.0 && crossover_cr <= 1.0))
    throw std::invalid_argument("de: crossover_cr must be in [0, 1]");
  if (pop_size < 4)
    throw std::invalid_argument("de: pop_size must be >= 4 for rand/1");
  if (budget < pop_size)
    throw std::invalid_argument("de: budget must be >= pop_size");
}

namespace {

double get_dim(const GainVector& g, int j) {
  return j == 0 ? g.kp : j == 1 ? g.ki : g.kd;
}

void set_dim(GainVector& g, int j, double v) {
  (j == 0 ? g.kp : j == 1 ? g.ki : g.kd) = v;
}

double checked_fitness(const Objective& objective, const GainVector& g,
                       ObjectiveSample& out) {
  out = objective(g);
  if (!std::isfinite(out.fitness)) {
    std::ostringstream msg;
    msg << "de: objective returned non-finite fitness at gains (" << g.kp << ", "
        << g.ki << ", " << g.kd << ")";
    throw ObjectiveError(msg.str());
  }
  return out.fitness;
}

}  // namespace

GainVector mutate_rand1(const Population& pop, int target_idx, double f,
                        const GainBounds& bounds, Rng& rng) {
  const int n = static_cast<int>(pop.members.size());
  if (n < 4)
    throw std::invalid_argument("mutate_rand1: population must have >= 4 members");

  // Draw r1, r2, r3 distinct and != target.
  std::uniform_int_distribution<int> pick(0, n - 1);
  int r[3];
  for (int k = 0; k < 3; ++k) {
    int candidate;
    bool clash;
    do {
      candidate = pick(rng);
      clash = candidate == target_idx;
      for (int m = 0; m < k; ++m) clash = clash || candidate == r[m];
    } while (clash);
    r[k] = candidate;
  }

  const GainVector& x1 = pop.members[r[0]];
  const GainVector& x2 = pop.members[r[1]];
  const GainVector& x3 = pop.members[r[2]];
  GainVector donor{x1.kp + f * (x2.kp - x3.kp), x1.ki + f * (x2.ki - x3.ki),
                   x1.kd + f * (x2.kd - x3.kd)};
  return bounds.clip(donor);
}

GainVector crossover_bin(const GainVector& target, const GainVector& donor,
                         double cr, Rng& rng) {
  std::uniform_int_distribution<int> dim(0, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int j_rand = dim(rng);

  GainVector trial = target;
  for (int j = 0; j < 3; ++j) {
    if (u(rng) < cr || j == j_rand) set_dim(trial, j, get_dim(donor, j));
  }
  return trial;
}

OptRun de_run(const Objective& objective, const GainBounds& bounds,
              const DeConfig& config, const GainVector& initial_state,
              std::uint64_t seed) {
  config.validate();
  if (!bounds.contains(initial_state))
    throw std::invalid_argument("de_run: initial_state outside bounds");

  Rng rng = make_rng(seed, "de");

  OptRun run;
  run.best_fitness = std::numeric_limits<double>::infinity();

  Population pop;
  pop.members.reserve(config.pop_size);
  pop.members.push_back(initial_state);
  for (int i = 1; i < config.pop_size; ++i)
    pop.members.push_back(bounds.sample_uniform(rng));

  auto record = [&](const GainVector& g, double fitness) {
    bool improved = fitness < run.best_fitness;
    if (improved) {
      run.best_fitness = fitness;
      run.best_gains = g;
    }
    run.history.push_back({g, fitness, improved});
    ++run.eval_count;
    ++pop.eval_count;
  };

  // Initial population, evaluated sequentially; convergence may fire here.
  for (const GainVector& member : pop.members) {
    ObjectiveSample sample;
    checked_fitness(objective, member, sample);
    pop.fitnesses.push_back(sample.fitness);
    record(member, sample.fitness);
    if (sample.converged) {
      run.converged = true;
      return run;
    }
    if (pop.eval_count >= config.budget) return run;
  }

  auto spread_stop = [&]() {
    if (config.tol <= 0.0 && config.atol <= 0.0) return false;
    auto [lo, hi] = std::minmax_element(pop.fitnesses.begin(), pop.fitnesses.end());
    double mean = 0.0;
    for (double f : pop.fitnesses) mean += f;
    mean /= pop.fitnesses.size();
    return (*hi - *lo) <= config.atol + config.tol * std::abs(mean);
  };

  while (pop.eval_count < config.budget && !spread_stop()) {
    for (int i = 0; i < config.pop_size && pop.eval_count < config.budget; ++i) {
      GainVector donor = mutate_rand1(pop, i, config.mutation_f, bounds, rng);
      GainVector trial = crossover_bin(pop.members[i], donor, config.crossover_cr, rng);

      ObjectiveSample sample;
      checked_fitness(objective, trial, sample);
      record(trial, sample.fitness);

      if (sample.fitness < pop.fitnesses[i]) {  // greedy selection
        pop.members[i] = trial;
        pop.fitnesses[i] = sample.fitness;
      }
      if (sample.converged) {
        run.converged = true;
        return run;
      }
    }
  }
  return run;
}

}  // namespace autotune
