// Workbench front end: generate trial matrices, run batches, simulate single
// experiments, and aggregate results into reports.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "autotune/config.hpp"
#include "autotune/report.hpp"

namespace fs = std::filesystem;
using namespace autotune;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;

WorkbenchConfig load_or_default(const std::string& config_path) {
  if (!config_path.empty()) return load_config(config_path);
  if (const char* env = std::getenv("AUTOTUNE_CONFIG"))
    return load_config(env);
  return default_config();
}

int cmd_generate(const std::string& config_path, const std::string& output_dir,
                 const std::vector<std::string>& opt_filter,
                 const std::vector<std::string>& robot_filter,
                 const std::vector<int>& eec_filter,
                 const std::vector<int>& state_filter,
                 const std::vector<std::uint64_t>& seed_override) {
  WorkbenchConfig cfg = load_or_default(config_path);

  if (!opt_filter.empty()) {
    std::vector<OptimizerKind> kept;
    for (const std::string& s : opt_filter) kept.push_back(optimizer_from_string(s));
    cfg.optimizers = kept;
  }
  if (!robot_filter.empty()) {
    std::vector<RobotKind> kept;
    for (const std::string& s : robot_filter) kept.push_back(robot_from_string(s));
    cfg.robots = kept;
  }
  if (!eec_filter.empty()) {
    std::set<int> ids(eec_filter.begin(), eec_filter.end());
    std::erase_if(cfg.eec_levels, [&](const EecLevel& e) { return !ids.count(e.id); });
  }
  if (!state_filter.empty()) {
    std::set<int> ids(state_filter.begin(), state_filter.end());
    std::erase_if(cfg.initial_states,
                  [&](const InitialState& s) { return !ids.count(s.id); });
  }
  if (!seed_override.empty()) cfg.seeds = seed_override;

  std::vector<TrialConfig> configs = enumerate_trials(cfg);
  if (configs.empty())
    std::cerr << "warning: empty trial matrix (an input list is empty)\n";

  fs::create_directories(output_dir);
  write_trial_matrix(configs, cfg.registry, cfg.robots,
                     (fs::path(output_dir) / "trial_matrix.json").string());
  std::cout << configs.size() << '\n';
  return kExitOk;
}

int cmd_run(const std::string& matrix_path, int parallelism,
            const std::string& output_dir) {
  TrialMatrix matrix = read_trial_matrix(matrix_path);
  fs::create_directories(output_dir);

  std::vector<TrialResult> results =
      run_batch(matrix.configs, matrix.registry, parallelism);

  for (std::size_t i = 0; i < results.size(); ++i) {
    const TrialResult& r = results[i];
    std::string name = "trial_" + std::to_string(i) + "_" +
                       to_string(r.config.optimizer) + "_eec" +
                       std::to_string(r.config.eec.id) + "_init" +
                       std::to_string(r.config.initial_state.id) + "_" +
                       to_string(r.config.robot) + "_seed" +
                       std::to_string(r.config.seed) + ".csv";
    write_trial_log_csv(r, (fs::path(output_dir) / name).string());
  }
  write_results_json(results, (fs::path(output_dir) / "results.json").string());

  int converged = 0;
  for (const TrialResult& r : results) converged += r.converged ? 1 : 0;
  std::cout << results.size() << " trials, " << converged << " converged\n";
  return kExitOk;  // non-convergence is a result, not an error
}

int cmd_sim(double kp, double ki, double kd, const std::string& robot_name,
            const std::string& config_path, const std::string& output_dir) {
  WorkbenchConfig cfg = load_or_default(config_path);
  RobotKind robot = robot_from_string(robot_name);
  if (!cfg.registry.has(robot)) {
    std::cerr << "error: no plant registered for " << robot_name << '\n';
    return kExitUsage;
  }

  GainVector gains{kp, ki, kd};
  if (!cfg.bounds.contains(gains)) {
    std::cerr << "error: gains (" << fmt6(kp) << ", " << fmt6(ki) << ", "
              << fmt6(kd) << ") outside bounds Kp [" << fmt6(cfg.bounds.lo.kp)
              << ", " << fmt6(cfg.bounds.hi.kp) << "], Ki ["
              << fmt6(cfg.bounds.lo.ki) << ", " << fmt6(cfg.bounds.hi.ki)
              << "], Kd [" << fmt6(cfg.bounds.lo.kd) << ", "
              << fmt6(cfg.bounds.hi.kd) << "]\n";
    return kExitUsage;
  }

  ExperimentTrace trace = run_experiment(gains, cfg.registry.plant(robot),
                                         cfg.registry.experiment(robot), 0);
  Evaluation ev = evaluate(trace, cfg.constraints, cfg.objective_threshold_ms);

  fs::create_directories(output_dir);
  fs::path trace_path = fs::path(output_dir) / "trace.csv";
  std::ofstream out(trace_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << trace_path.string() << '\n';
    return kExitIo;
  }
  out << "t_ms,theta_deg\n";
  for (std::size_t i = 0; i < trace.samples.size(); ++i)
    out << i * trace.dt_ms << ',' << fmt6(trace.samples[i]) << '\n';

  auto opt6 = [](const std::optional<double>& v) {
    return v ? fmt6(*v) : std::string("n/a");
  };
  std::cout << "rise_time_ms: " << opt6(ev.metrics.rise_time_ms) << '\n'
            << "overshoot_pct: " << fmt6(ev.metrics.overshoot_pct) << '\n'
            << "settling_time_ms: " << opt6(ev.metrics.settling_time_ms) << '\n'
            << "steady_state_error_deg: "
            << fmt6(ev.metrics.steady_state_error_deg) << '\n'
            << "accepted: " << (ev.accepted ? "yes" : "no") << '\n'
            << "fitness: " << fmt6(ev.fitness) << '\n';
  return kExitOk;
}

int cmd_report(const std::string& results_path, const std::string& output_dir) {
  std::vector<TrialResult> results = read_results_json(results_path);
  fs::create_directories(output_dir);

  std::vector<SummaryRow> rows = summarize(results);
  for (const SummaryRow& r : rows) {
    if (!r.best_settling_ms)
      std::cerr << "warning: no converged trials for " << to_string(r.robot)
                << "/eec" << r.eec_id << "/init" << r.initial_state_id << "/"
                << to_string(r.optimizer) << '\n';
  }
  write_summary_csv(rows, (fs::path(output_dir) / "summary.csv").string());

  // One settling-time KDE per (robot, eec) with BO and DE series.
  std::set<std::pair<std::string, int>> groups;
  for (const TrialResult& r : results)
    groups.insert({to_string(r.config.robot), r.config.eec.id});
  for (const auto& [robot, eec_id] : groups) {
    KdeSeries bo{"BO", "blue", {}};
    KdeSeries de{"DE", "red", {}};
    std::string eec_label;
    for (const TrialResult& r : results) {
      if (to_string(r.config.robot) != robot || r.config.eec.id != eec_id)
        continue;
      eec_label = r.config.eec.label;
      if (!r.converged || !r.best_metrics.settling_time_ms) continue;
      auto& series = r.config.optimizer == OptimizerKind::Bo ? bo : de;
      series.samples.push_back(*r.best_metrics.settling_time_ms);
    }
    if (bo.samples.empty() && de.samples.empty()) continue;
    std::string name = "kde_settling_" + robot + "_eec" + std::to_string(eec_id) + ".svg";
    write_kde_svg({bo, de}, robot + " / " + eec_label, "settling time (ms)",
                  (fs::path(output_dir) / name).string());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PID auto-tuning workbench"};
  app.require_subcommand(1);

  std::string config_path, output_dir = ".", matrix_path, results_path;
  std::string robot_name = "ddrm";
  std::vector<std::string> opt_filter, robot_filter;
  std::vector<int> eec_filter, state_filter;
  std::vector<std::uint64_t> seed_override;
  int parallelism = 1;
  double kp = 0, ki = 0, kd = 0;

  auto* generate = app.add_subcommand("generate", "enumerate the trial matrix");
  generate->add_option("--config", config_path, "workbench config file (json)");
  generate->add_option("--out", output_dir, "output directory");
  generate->add_option("--optimizer", opt_filter, "keep only these optimizers");
  generate->add_option("--robot", robot_filter, "keep only these robots");
  generate->add_option("--eec", eec_filter, "keep only these EEC ids");
  generate->add_option("--init-state", state_filter, "keep only these initial-state ids");
  generate->add_option("--seeds", seed_override, "override the seed list");

  auto* run = app.add_subcommand("run", "execute a trial matrix");
  run->add_option("--matrix", matrix_path, "trial matrix file")->required();
  run->add_option("--out", output_dir, "output directory");
  run->add_option("--parallelism", parallelism, "concurrent trials (1 = serial)");

  auto* sim = app.add_subcommand("sim", "run one experiment and print metrics");
  sim->add_option("--kp", kp)->required();
  sim->add_option("--ki", ki)->required();
  sim->add_option("--kd", kd)->required();
  sim->add_option("--robot", robot_name, "ddrm | omnidirectional");
  sim->add_option("--config", config_path, "workbench config file (json)");
  sim->add_option("--out", output_dir, "output directory");

  auto* report = app.add_subcommand("report", "summarize batch results");
  report->add_option("--results", results_path, "results.json from `run`")->required();
  report->add_option("--out", output_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // --help is a success
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (generate->parsed())
      return cmd_generate(config_path, output_dir, opt_filter, robot_filter,
                          eec_filter, state_filter, seed_override);
    if (run->parsed()) return cmd_run(matrix_path, parallelism, output_dir);
    if (sim->parsed())
      return cmd_sim(kp, ki, kd, robot_name, config_path, output_dir);
    if (report->parsed()) return cmd_report(results_path, output_dir);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
