#ifndef AUTOTUNE_BO_HPP
#define AUTOTUNE_BO_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "autotune/optimizer.hpp"

namespace autotune {

struct BoConfig {
  double xi = 0.1;  // expected-improvement exploration bonus
  int budget = 150;
  double kernel_length_scale = 0.2;  // in unit-cube coordinates
  double signal_variance = 1.0;
  double jitter = 1e-8;
  int candidate_count = 2048;

  void validate() const;
};

// Gaussian-process surrogate over the unit cube with a squared-exponential
// kernel and fixed hyperparameters. Targets are standardized internally;
// predictions are de-standardized. Exact duplicate inputs are collapsed by
// averaging their targets before fitting.
class GpModel {
 public:
  // inputs are unit-cube points. Throws std::invalid_argument on empty input
  // and std::runtime_error (advising a larger jitter) if the Cholesky
  // factorization of K + jitter*I fails.
  static GpModel fit(const std::vector<std::array<double, 3>>& inputs,
                     const std::vector<double>& targets, const BoConfig& config);

  struct Prediction {
    double mean = 0.0;
    double std = 0.0;  // never negative
  };
  Prediction predict(const std::array<double, 3>& x) const;

  const std::vector<std::array<double, 3>>& train_inputs() const {
    return inputs_;
  }

 private:
  GpModel() = default;

  std::vector<std::array<double, 3>> inputs_;
  std::vector<double> alpha_;      // L^-T L^-1 y_std
  std::vector<double> chol_;       // row-major lower Cholesky factor
  double target_mean_ = 0.0;
  double target_scale_ = 1.0;
  double length_scale_ = 0.2;
  double signal_variance_ = 1.0;
  int n_ = 0;
};

// EI for minimization with bonus xi: a = best - mean - xi;
// std = 0 gives max(a, 0), else a*Phi(a/std) + std*phi(a/std).
double expected_improvement(double mean, double std, double best_fitness,
                            double xi);

// Acquisition argmax over candidate_count uniform unit-cube points plus one
// Gaussian perturbation (sigma 0.05, clipped) of every training point; ties
// go to the earliest generated candidate.
GainVector propose_next(const GpModel& model, const GainBounds& bounds,
                        const BoConfig& config, double best_fitness, Rng& rng);

// Sequential BO: evaluation 1 is the initial state, then fit -> propose ->
// evaluate until convergence or budget.
OptRun bo_run(const Objective& objective, const GainBounds& bounds,
              const BoConfig& config, const GainVector& initial_state,
              std::uint64_t seed);

}  // namespace autotune

#endif
