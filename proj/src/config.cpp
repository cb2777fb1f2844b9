#include "autotune/config.hpp"

#include <fstream>

#include "json.hpp"
#include "json_util.hpp"

namespace autotune {

using json = nlohmann::ordered_json;

namespace {

const json& require(const json& j, const std::string& key,
                    const std::string& context) {
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError("config: missing key '" + context + key + "'");
  return *it;
}

double require_number(const json& j, const std::string& key,
                      const std::string& context) {
  const json& v = require(j, key, context);
  if (!v.is_number())
    throw ConfigError("config: key '" + context + key + "' must be a number");
  return v.get<double>();
}

json robots_to_json(const PlantRegistry& registry,
                    const std::vector<RobotKind>& robots) {
  json out = json::object();
  for (RobotKind robot : robots) {
    const PlantParams& p = registry.plant(robot);
    const ExperimentParams& e = registry.experiment(robot);
    out[to_string(robot)] = json{{"inertia", p.inertia},
                                 {"damping", p.damping},
                                 {"command_limit", p.command_limit},
                                 {"noise_std", p.noise_std},
                                 {"setpoint", e.setpoint},
                                 {"duration_ms", e.duration_ms},
                                 {"dt_ms", e.dt_ms},
                                 {"abort_angle", e.abort_angle}};
  }
  return out;
}

std::pair<PlantRegistry, std::vector<RobotKind>> robots_from_json(const json& j) {
  PlantRegistry registry;
  std::vector<RobotKind> robots;
  for (const auto& [name, body] : j.items()) {
    RobotKind robot;
    try {
      robot = robot_from_string(name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: robots: ") + e.what());
    }
    const std::string ctx = "robots." + name + ".";
    PlantParams plant;
    plant.inertia = require_number(body, "inertia", ctx);
    plant.damping = require_number(body, "damping", ctx);
    plant.command_limit = require_number(body, "command_limit", ctx);
    plant.noise_std = body.value("noise_std", 0.0);
    ExperimentParams exp;
    exp.setpoint = body.value("setpoint", 90.0);
    exp.duration_ms = static_cast<int>(require_number(body, "duration_ms", ctx));
    exp.dt_ms = static_cast<int>(body.value("dt_ms", 100));
    exp.abort_angle = body.value("abort_angle", 120.0);
    try {
      registry.add(robot, plant, exp);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("config: robots." + name + ": " + e.what());
    }
    robots.push_back(robot);
  }
  return {registry, robots};
}

}  // namespace

WorkbenchConfig default_config() {
  WorkbenchConfig cfg;
  cfg.registry = PlantRegistry::defaults();
  cfg.robots = {RobotKind::Ddrm, RobotKind::Omnidirectional};
  cfg.initial_states = {
      {1, "high-p-low-i-low-d", GainVector{20.0, 0.05, 0.05}},
      {2, "high-p-low-i-high-d", GainVector{20.0, 0.05, 0.9}},
  };
  cfg.eec_levels = {
      {0, "balanced", 0.6, 0.6, 0.1},
      {1, "exploration-focused", 0.8, 0.3, 0.2},
      {2, "exploitation-focused", 0.5, 0.9, 0.01},
  };
  cfg.optimizers = {OptimizerKind::De, OptimizerKind::Bo};
  cfg.seeds = {0};
  return cfg;
}

WorkbenchConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }

  WorkbenchConfig cfg;
  std::tie(cfg.registry, cfg.robots) = robots_from_json(require(j, "robots", ""));

  cfg.initial_states.clear();
  for (const json& s : require(j, "initial_states", "")) {
    InitialState state;
    state.id = static_cast<int>(require_number(s, "id", "initial_states."));
    state.label = s.value("label", std::string{});
    state.gains.kp = require_number(s, "kp", "initial_states.");
    state.gains.ki = require_number(s, "ki", "initial_states.");
    state.gains.kd = require_number(s, "kd", "initial_states.");
    cfg.initial_states.push_back(std::move(state));
  }

  cfg.eec_levels.clear();
  for (const json& e : require(j, "eec_levels", "")) {
    EecLevel eec;
    eec.id = static_cast<int>(require_number(e, "id", "eec_levels."));
    eec.label = e.value("label", std::string{});
    eec.de_mutation_f = require_number(e, "mutation_f", "eec_levels.");
    eec.de_crossover_cr = require_number(e, "crossover_cr", "eec_levels.");
    eec.bo_xi = require_number(e, "xi", "eec_levels.");
    cfg.eec_levels.push_back(std::move(eec));
  }

  cfg.optimizers.clear();
  for (const json& o : require(j, "optimizers", "")) {
    try {
      cfg.optimizers.push_back(optimizer_from_string(o.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: optimizers: ") + e.what());
    }
  }

  cfg.seeds.clear();
  for (const json& s : require(j, "seeds", ""))
    cfg.seeds.push_back(s.get<std::uint64_t>());

  cfg.budget = static_cast<int>(j.value("budget", 150));
  cfg.objective_threshold_ms = j.value("objective_threshold_ms", 2500.0);
  if (j.contains("constraints")) {
    const json& c = j["constraints"];
    cfg.constraints.max_overshoot_pct =
        require_number(c, "max_overshoot_pct", "constraints.");
    cfg.constraints.max_rise_time_ms =
        require_number(c, "max_rise_time_ms", "constraints.");
  }
  if (j.contains("bounds")) {
    const json& b = j["bounds"];
    auto axis = [&](const char* key) -> std::pair<double, double> {
      const json& arr = require(b, key, "bounds.");
      if (!arr.is_array() || arr.size() != 2)
        throw ConfigError(std::string("config: bounds.") + key +
                          " must be [lo, hi]");
      double lo = arr[0].get<double>(), hi = arr[1].get<double>();
      if (!(lo < hi))
        throw ConfigError(std::string("config: bounds.") + key +
                          " must be well-ordered");
      return {lo, hi};
    };
    auto [kp_lo, kp_hi] = axis("kp");
    auto [ki_lo, ki_hi] = axis("ki");
    auto [kd_lo, kd_hi] = axis("kd");
    cfg.bounds.lo = {kp_lo, ki_lo, kd_lo};
    cfg.bounds.hi = {kp_hi, ki_hi, kd_hi};
  }
  return cfg;
}

std::vector<TrialConfig> enumerate_trials(const WorkbenchConfig& cfg) {
  std::vector<TrialConfig> configs = generate_configs(
      cfg.eec_levels, cfg.initial_states, cfg.optimizers, cfg.robots, cfg.seeds);
  for (TrialConfig& c : configs) {
    c.budget = cfg.budget;
    c.objective_threshold_ms = cfg.objective_threshold_ms;
    c.constraints = cfg.constraints;
    c.bounds = cfg.bounds;
  }
  return configs;
}

void write_trial_matrix(const std::vector<TrialConfig>& configs,
                        const PlantRegistry& registry,
                        const std::vector<RobotKind>& robots,
                        const std::string& path) {
  json trials = json::array();
  for (const TrialConfig& c : configs) trials.push_back(trial_config_to_json(c));
  json doc{{"robots", robots_to_json(registry, robots)},
           {"trials", std::move(trials)}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

TrialMatrix read_trial_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("matrix: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("matrix: " + path + ": " + e.what());
  }

  TrialMatrix matrix;
  std::vector<RobotKind> robots;
  std::tie(matrix.registry, robots) = robots_from_json(require(j, "robots", ""));
  for (const json& t : require(j, "trials", "")) {
    try {
      matrix.configs.push_back(trial_config_from_json(t));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("matrix: trials: ") + e.what());
    }
  }
  for (const TrialConfig& c : matrix.configs) {
    if (!matrix.registry.has(c.robot))
      throw ConfigError("matrix: trial references robot '" + to_string(c.robot) +
                        "' with no plant entry");
  }
  return matrix;
}

}  // namespace autotune
