#ifndef AUTOTUNE_CONFIG_HPP
#define AUTOTUNE_CONFIG_HPP

#include <string>
#include <vector>

#include "autotune/trials.hpp"

namespace autotune {

// Everything the workbench reads from the trial-matrix config file.
struct WorkbenchConfig {
  PlantRegistry registry;
  std::vector<RobotKind> robots;  // in file order
  std::vector<InitialState> initial_states;
  std::vector<EecLevel> eec_levels;
  std::vector<OptimizerKind> optimizers;
  std::vector<std::uint64_t> seeds;
  int budget = 150;
  double objective_threshold_ms = 2500.0;
  Constraints constraints;
  GainBounds bounds;
};

// Raised on a malformed config; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

WorkbenchConfig load_config(const std::string& path);
WorkbenchConfig default_config();

// generate_configs over the workbench lists, with the file's budget,
// threshold, constraints and bounds applied to every trial.
std::vector<TrialConfig> enumerate_trials(const WorkbenchConfig& cfg);

// Trial-matrix file: the enumerated configs plus the plant registry they run
// against, so `run` needs nothing else.
void write_trial_matrix(const std::vector<TrialConfig>& configs,
                        const PlantRegistry& registry,
                        const std::vector<RobotKind>& robots,
                        const std::string& path);
struct TrialMatrix {
  std::vector<TrialConfig> configs;
  PlantRegistry registry;
};
TrialMatrix read_trial_matrix(const std::string& path);

}  // namespace autotune

#endif
