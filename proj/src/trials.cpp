#include "autotune/trials.hpp"

#include <chrono>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "autotune/bo.hpp"
#include "autotune/de.hpp"

namespace autotune {

std::string to_string(OptimizerKind k) {
  return k == OptimizerKind::De ? "de" : "bo";
}

std::string to_string(RobotKind k) {
  return k == RobotKind::Ddrm ? "ddrm" : "omnidirectional";
}

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "de") return OptimizerKind::De;
  if (s == "bo") return OptimizerKind::Bo;
  throw std::invalid_argument("unknown optimizer kind: " + s);
}

RobotKind robot_from_string(const std::string& s) {
  if (s == "ddrm") return RobotKind::Ddrm;
  if (s == "omnidirectional") return RobotKind::Omnidirectional;
  throw std::invalid_argument("unknown robot kind: " + s);
}

void PlantRegistry::add(RobotKind robot, PlantParams plant, ExperimentParams exp) {
  plant.validate();
  exp.validate();
  entries_[robot] = {plant, exp};
}

bool PlantRegistry::has(RobotKind robot) const { return entries_.count(robot) > 0; }

const PlantParams& PlantRegistry::plant(RobotKind robot) const {
  auto it = entries_.find(robot);
  if (it == entries_.end())
    throw std::out_of_range("plant registry: no entry for " + to_string(robot));
  return it->second.first;
}

const ExperimentParams& PlantRegistry::experiment(RobotKind robot) const {
  auto it = entries_.find(robot);
  if (it == entries_.end())
    throw std::out_of_range("plant registry: no entry for " + to_string(robot));
  return it->second.second;
}

PlantRegistry PlantRegistry::defaults() {
  PlantRegistry reg;
  reg.add(RobotKind::Ddrm, PlantParams{0.3, 0.5, 100.0, 0.0},
          ExperimentParams{90.0, 5000, 100, 120.0});
  reg.add(RobotKind::Omnidirectional, PlantParams{0.35, 0.7, 120.0, 0.0},
          ExperimentParams{90.0, 10000, 100, 120.0});
  return reg;
}

std::vector<TrialConfig> generate_configs(const std::vector<EecLevel>& eecs,
                                          const std::vector<InitialState>& initial_states,
                                          const std::vector<OptimizerKind>& optimizers,
                                          const std::vector<RobotKind>& robots,
                                          const std::vector<std::uint64_t>& seeds) {
  std::vector<TrialConfig> configs;
  configs.reserve(eecs.size() * initial_states.size() * optimizers.size() *
                  robots.size() * seeds.size());
  for (const EecLevel& eec : eecs)
    for (const InitialState& init : initial_states)
      for (OptimizerKind opt : optimizers)
        for (RobotKind robot : robots)
          for (std::uint64_t seed : seeds) {
            TrialConfig cfg;
            cfg.optimizer = opt;
            cfg.eec = eec;
            cfg.initial_state = init;
            cfg.robot = robot;
            cfg.seed = seed;
            configs.push_back(cfg);
          }
  return configs;
}

TrialResult execute_trial(const TrialConfig& config, const PlantRegistry& registry) {
  TrialResult result;
  result.config = config;

  auto t0 = std::chrono::steady_clock::now();
  try {
    const PlantParams& plant = registry.plant(config.robot);
    const ExperimentParams& exp = registry.experiment(config.robot);
    const std::uint64_t noise_seed = derive_seed(config.seed, "trial-noise");

    std::vector<TrialEval>& history = result.history;
    Objective objective = [&](const GainVector& gains) {
      ExperimentTrace trace = run_experiment(gains, plant, exp, noise_seed);
      Evaluation ev = evaluate(trace, config.constraints, config.objective_threshold_ms);
      history.push_back({static_cast<int>(history.size()) + 1, gains, ev.metrics,
                         ev.accepted, ev.fitness});
      return ObjectiveSample{ev.fitness, ev.converged};
    };

    OptRun run;
    if (config.optimizer == OptimizerKind::De) {
      DeConfig de;
      de.mutation_f = config.eec.de_mutation_f;
      de.crossover_cr = config.eec.de_crossover_cr;
      de.budget = config.budget;
      run = de_run(objective, config.bounds, de, config.initial_state.gains,
                   config.seed);
    } else {
      BoConfig bo;
      bo.xi = config.eec.bo_xi;
      bo.budget = config.budget;
      run = bo_run(objective, config.bounds, bo, config.initial_state.gains,
                   config.seed);
    }

    result.converged = run.converged;
    result.eval_count = run.eval_count;
    result.best_gains = run.best_gains;
    for (const TrialEval& ev : history) {
      if (ev.gains == run.best_gains && ev.fitness == run.best_fitness) {
        result.best_metrics = ev.metrics;
        break;
      }
    }
  } catch (const std::exception& e) {
    result.failed = true;
    result.failure = e.what();
    result.eval_count = static_cast<int>(result.history.size());
  }
  auto t1 = std::chrono::steady_clock::now();
  result.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return result;
}

std::vector<TrialResult> run_batch(const std::vector<TrialConfig>& configs,
                                   const PlantRegistry& registry, int parallelism) {
  std::vector<TrialResult> results(configs.size());
  const int n = static_cast<int>(configs.size());

  if (parallelism <= 1) {
    // Serial reference path.
    for (int i = 0; i < n; ++i) results[i] = execute_trial(configs[i], registry);
    return results;
  }

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(parallelism)
#endif
  for (int i = 0; i < n; ++i) results[i] = execute_trial(configs[i], registry);
  return results;
}

}  // namespace autotune
