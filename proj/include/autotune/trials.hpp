#ifndef AUTOTUNE_TRIALS_HPP
#define AUTOTUNE_TRIALS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "autotune/metrics.hpp"
#include "autotune/optimizer.hpp"
#include "autotune/plant.hpp"

namespace autotune {

enum class OptimizerKind { De, Bo };
enum class RobotKind { Ddrm, Omnidirectional };

std::string to_string(OptimizerKind k);
std::string to_string(RobotKind k);
OptimizerKind optimizer_from_string(const std::string& s);
RobotKind robot_from_string(const std::string& s);

// One exploration-exploitation level: a named pairing of DE (F, CR) and BO xi.
struct EecLevel {
  int id = 0;
  std::string label;
  double de_mutation_f = 0.6;
  double de_crossover_cr = 0.6;
  double bo_xi = 0.1;
};

struct InitialState {
  int id = 0;
  std::string label;
  GainVector gains;
};

struct TrialConfig {
  OptimizerKind optimizer = OptimizerKind::De;
  EecLevel eec;
  InitialState initial_state;
  RobotKind robot = RobotKind::Ddrm;
  std::uint64_t seed = 0;
  int budget = 150;
  double objective_threshold_ms = 2500.0;
  Constraints constraints;
  GainBounds bounds;
};

struct TrialEval {
  int eval_index = 0;  // 1-based
  GainVector gains;
  StepMetrics metrics;
  bool accepted = false;
  double fitness = 0.0;
};

struct TrialResult {
  TrialConfig config;
  bool converged = false;
  bool failed = false;  // objective blew up; diagnostic below
  std::string failure;
  int eval_count = 0;
  double wall_time_ms = 0.0;
  GainVector best_gains;
  StepMetrics best_metrics;
  std::vector<TrialEval> history;
};

// Plant and experiment parameters per robot kind.
class PlantRegistry {
 public:
  void add(RobotKind robot, PlantParams plant, ExperimentParams exp);
  bool has(RobotKind robot) const;
  const PlantParams& plant(RobotKind robot) const;       // throws if missing
  const ExperimentParams& experiment(RobotKind robot) const;

  static PlantRegistry defaults();

 private:
  std::map<RobotKind, std::pair<PlantParams, ExperimentParams>> entries_;
};

// Full Cartesian product, eec-major then initial state, optimizer, robot,
// seed. Any empty input yields an empty result.
std::vector<TrialConfig> generate_configs(const std::vector<EecLevel>& eecs,
                                          const std::vector<InitialState>& initial_states,
                                          const std::vector<OptimizerKind>& optimizers,
                                          const std::vector<RobotKind>& robots,
                                          const std::vector<std::uint64_t>& seeds);

// Run one trial to convergence or budget. Objective failures are recorded on
// the result (failed=true), never thrown.
TrialResult execute_trial(const TrialConfig& config, const PlantRegistry& registry);

// Execute all trials; output order matches input order. parallelism <= 1 runs
// the serial reference path, otherwise trials fan out across OpenMP threads.
// Per-trial determinism makes both paths produce identical results.
std::vector<TrialResult> run_batch(const std::vector<TrialConfig>& configs,
                                   const PlantRegistry& registry, int parallelism);

}  // namespace autotune

#endif
