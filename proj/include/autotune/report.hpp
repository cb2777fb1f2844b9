#ifndef AUTOTUNE_REPORT_HPP
#define AUTOTUNE_REPORT_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "autotune/trials.hpp"

namespace autotune {

// Per-(robot, eec, initial state, optimizer) aggregate. best_* are taken over
// converged runs only and absent when none converged.
struct SummaryRow {
  RobotKind robot = RobotKind::Ddrm;
  int eec_id = 0;
  std::string eec_label;
  int initial_state_id = 0;
  OptimizerKind optimizer = OptimizerKind::De;
  int total_runs = 0;
  int converged_runs = 0;
  double convergence_pct = 0.0;
  std::optional<double> best_settling_ms;
  std::optional<double> best_rise_ms;
  std::optional<double> best_overshoot_pct;
  std::optional<int> eval_count_at_convergence;  // of the best converged run
};

std::vector<SummaryRow> summarize(const std::vector<TrialResult>& results);

struct KdeCurve {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
};

// Gaussian KDE on a 512-point grid spanning [min-4h, max+4h]. Auto bandwidth
// is Silverman's rule h = 0.9*min(sd, IQR/1.34)*n^(-1/5); throws
// std::invalid_argument (advising an explicit bandwidth) when that is zero.
KdeCurve kde(std::span<const double> samples,
             std::optional<double> bandwidth = std::nullopt);

// 6-significant-digit float formatting used by every text artifact.
std::string fmt6(double v);

// Byte-stable exporters. I/O failures throw std::runtime_error naming the path.
void write_trial_log_csv(const TrialResult& result, const std::string& path);
void write_results_json(const std::vector<TrialResult>& results,
                        const std::string& path);
std::vector<TrialResult> read_results_json(const std::string& path);
void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& path);

// One KDE figure: BO and DE settling-time (or error) densities with dashed
// mean markers, SVG 1.1.
struct KdeSeries {
  std::string label;
  std::string color;
  std::vector<double> samples;
};
void write_kde_svg(const std::vector<KdeSeries>& series, const std::string& title,
                   const std::string& x_label, const std::string& path);

}  // namespace autotune

#endif
