#include "autotune/trials.hpp"

#include "autotune/config.hpp"
#include "doctest.h"

using namespace autotune;

namespace {

WorkbenchConfig paper_defaults() { return default_config(); }

}  // namespace

TEST_CASE("generate_configs: cartesian product counts") {
  WorkbenchConfig cfg = paper_defaults();

  // 3 EECs x 2 initial states x 1 optimizer x 1 robot x 1 seed -> 6 pairs
  auto six = generate_configs(cfg.eec_levels, cfg.initial_states,
                              {OptimizerKind::De}, {RobotKind::Ddrm}, {0});
  CHECK(six.size() == 6);

  // full default -> 24 trials
  auto all = enumerate_trials(cfg);
  CHECK(all.size() == 24);

  CHECK(generate_configs({}, cfg.initial_states, cfg.optimizers, cfg.robots,
                         cfg.seeds)
            .empty());
}

TEST_CASE("generate_configs: product size and uniqueness always hold") {
  WorkbenchConfig cfg = paper_defaults();
  std::vector<std::uint64_t> seeds{0, 1, 2};
  auto configs = generate_configs(cfg.eec_levels, cfg.initial_states,
                                  cfg.optimizers, cfg.robots, seeds);
  CHECK(configs.size() == 3 * 2 * 2 * 2 * 3);
  for (std::size_t i = 0; i < configs.size(); ++i)
    for (std::size_t j = i + 1; j < configs.size(); ++j) {
      bool same = configs[i].eec.id == configs[j].eec.id &&
                  configs[i].initial_state.id == configs[j].initial_state.id &&
                  configs[i].optimizer == configs[j].optimizer &&
                  configs[i].robot == configs[j].robot &&
                  configs[i].seed == configs[j].seed;
      CHECK_FALSE(same);
    }
}

TEST_CASE("generate_configs: ordering is eec-major") {
  WorkbenchConfig cfg = paper_defaults();
  auto configs = enumerate_trials(cfg);
  // eec changes slowest
  CHECK(configs[0].eec.id == 0);
  CHECK(configs[7].eec.id == 0);
  CHECK(configs[8].eec.id == 1);
  CHECK(configs[16].eec.id == 2);
  // within an eec block: initial state, then optimizer, then robot
  CHECK(configs[0].initial_state.id == 1);
  CHECK(configs[4].initial_state.id == 2);
  CHECK(configs[0].optimizer == OptimizerKind::De);
  CHECK(configs[2].optimizer == OptimizerKind::Bo);
  CHECK(configs[0].robot == RobotKind::Ddrm);
  CHECK(configs[1].robot == RobotKind::Omnidirectional);
}

TEST_CASE("execute_trial: budget 1 semantics") {
  WorkbenchConfig cfg = paper_defaults();
  PlantRegistry registry = cfg.registry;

  TrialConfig trial;
  trial.optimizer = OptimizerKind::De;
  trial.eec = cfg.eec_levels[0];
  trial.robot = RobotKind::Ddrm;
  trial.budget = 15;  // DE minimum is pop_size; convergence checked per eval

  // An initial state already satisfying the predicate converges on eval 1.
  trial.initial_state = {0, "known-good", GainVector{3.53, 0.0, 0.89}};
  TrialResult good = execute_trial(trial, registry);
  CHECK(good.converged);
  CHECK(good.eval_count == 1);
  CHECK(good.history.size() == 1);

  // BO supports a true budget of 1.
  trial.optimizer = OptimizerKind::Bo;
  trial.budget = 1;
  trial.initial_state = {1, "high-p-low-i-low-d", GainVector{20.0, 0.05, 0.05}};
  TrialResult bad = execute_trial(trial, registry);
  CHECK_FALSE(bad.converged);
  CHECK(bad.eval_count == 1);
}

TEST_CASE("execute_trial: converged history ends at the converging evaluation") {
  WorkbenchConfig cfg = paper_defaults();
  TrialConfig trial;
  trial.optimizer = OptimizerKind::De;
  trial.eec = cfg.eec_levels[0];
  trial.robot = RobotKind::Ddrm;
  trial.initial_state = cfg.initial_states[0];
  trial.seed = 3;
  TrialResult result = execute_trial(trial, cfg.registry);
  REQUIRE(result.converged);
  CHECK(static_cast<int>(result.history.size()) == result.eval_count);
  const TrialEval& last = result.history.back();
  CHECK(last.accepted);
  REQUIRE(last.metrics.settling_time_ms.has_value());
  CHECK(*last.metrics.settling_time_ms <= trial.objective_threshold_ms);
  for (std::size_t i = 0; i + 1 < result.history.size(); ++i) {
    bool earlier_converged =
        result.history[i].accepted && result.history[i].metrics.settling_time_ms &&
        *result.history[i].metrics.settling_time_ms <= trial.objective_threshold_ms;
    CHECK_FALSE(earlier_converged);
  }
}

TEST_CASE("execute_trial: missing plant is a failure record, not a crash") {
  PlantRegistry empty;
  TrialConfig trial;
  trial.eec = paper_defaults().eec_levels[0];
  trial.initial_state = {1, "x", GainVector{20.0, 0.05, 0.05}};
  TrialResult result = execute_trial(trial, empty);
  CHECK(result.failed);
  CHECK_FALSE(result.failure.empty());
  CHECK_FALSE(result.converged);
}

TEST_CASE("execute_trial: reproducible for the same seed") {
  WorkbenchConfig cfg = paper_defaults();
  TrialConfig trial;
  trial.optimizer = OptimizerKind::Bo;
  trial.eec = cfg.eec_levels[1];
  trial.robot = RobotKind::Omnidirectional;
  trial.initial_state = cfg.initial_states[1];
  trial.seed = 7;
  trial.budget = 20;
  TrialResult a = execute_trial(trial, cfg.registry);
  TrialResult b = execute_trial(trial, cfg.registry);
  CHECK(a.converged == b.converged);
  CHECK(a.eval_count == b.eval_count);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].gains == b.history[i].gains);
    CHECK(a.history[i].fitness == b.history[i].fitness);
  }
}

TEST_CASE("run_batch: parallel matches serial; order preserved; faults isolated") {
  WorkbenchConfig cfg = paper_defaults();
  cfg.budget = 60;
  std::vector<TrialConfig> configs = enumerate_trials(cfg);
  configs.resize(6);
  // Force one failure: a robot with no registry entry.
  PlantRegistry partial;
  partial.add(RobotKind::Ddrm, cfg.registry.plant(RobotKind::Ddrm),
              cfg.registry.experiment(RobotKind::Ddrm));

  auto serial = run_batch(configs, partial, 1);
  auto parallel = run_batch(configs, partial, 4);
  REQUIRE(serial.size() == 6);
  REQUIRE(parallel.size() == 6);

  int failures = 0;
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].config.seed == configs[i].seed);
    CHECK(serial[i].config.robot == configs[i].robot);
    CHECK(serial[i].failed == parallel[i].failed);
    CHECK(serial[i].converged == parallel[i].converged);
    CHECK(serial[i].eval_count == parallel[i].eval_count);
    CHECK(serial[i].best_gains == parallel[i].best_gains);
    failures += serial[i].failed ? 1 : 0;
  }
  CHECK(failures == 3);  // half the 6 configs reference the missing robot

  CHECK(run_batch({}, partial, 4).empty());
}
