#include "autotune/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "json_util.hpp"

namespace autotune {

using json = nlohmann::ordered_json;

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<SummaryRow> summarize(const std::vector<TrialResult>& results) {
  using Key = std::tuple<std::string, int, int, std::string>;
  std::map<Key, std::vector<const TrialResult*>> groups;
  for (const TrialResult& r : results) {
    Key key{to_string(r.config.robot), r.config.eec.id, r.config.initial_state.id,
            to_string(r.config.optimizer)};
    groups[key].push_back(&r);
  }

  std::vector<SummaryRow> rows;
  for (const auto& [key, members] : groups) {
    SummaryRow row;
    row.robot = robot_from_string(std::get<0>(key));
    row.eec_id = std::get<1>(key);
    row.eec_label = members.front()->config.eec.label;
    row.initial_state_id = std::get<2>(key);
    row.optimizer = optimizer_from_string(std::get<3>(key));
    row.total_runs = static_cast<int>(members.size());

    const TrialResult* best = nullptr;
    for (const TrialResult* r : members) {
      if (!r->converged) continue;
      ++row.converged_runs;
      if (!r->best_metrics.settling_time_ms) continue;
      if (!best || *r->best_metrics.settling_time_ms <
                       *best->best_metrics.settling_time_ms)
        best = r;
    }
    row.convergence_pct = 100.0 * row.converged_runs / row.total_runs;
    if (best) {
      row.best_settling_ms = best->best_metrics.settling_time_ms;
      row.best_rise_ms = best->best_metrics.rise_time_ms;
      row.best_overshoot_pct = best->best_metrics.overshoot_pct;
      row.eval_count_at_convergence = best->eval_count;
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double quantile(std::vector<double> sorted, double q) {
  // Linear interpolation between order statistics.
  double pos = q * (sorted.size() - 1);
  std::size_t i = static_cast<std::size_t>(pos);
  double frac = pos - i;
  if (i + 1 >= sorted.size()) return sorted.back();
  return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

double silverman_bandwidth(std::span<const double> samples) {
  const std::size_t n = samples.size();
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= n;
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= (n - 1);
  double sd = std::sqrt(var);

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);

  double spread = std::min(sd, iqr / 1.34);
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

}  // namespace

KdeCurve kde(std::span<const double> samples, std::optional<double> bandwidth) {
  if (samples.empty()) throw std::invalid_argument("kde: no samples");

  double h;
  if (bandwidth) {
    if (!(*bandwidth > 0.0))
      throw std::invalid_argument("kde: bandwidth must be > 0");
    h = *bandwidth;
  } else {
    if (samples.size() < 2)
      throw std::invalid_argument("kde: auto bandwidth needs >= 2 samples");
    h = silverman_bandwidth(samples);
    if (!(h > 0.0))
      throw std::invalid_argument(
          "kde: degenerate samples (zero spread); pass an explicit bandwidth");
  }

  auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it - 4.0 * h;
  const double hi = *hi_it + 4.0 * h;
  const int grid_size = 512;

  KdeCurve curve;
  curve.bandwidth = h;
  curve.grid.resize(grid_size);
  curve.density.resize(grid_size);
  const double step = (hi - lo) / (grid_size - 1);
  for (int i = 0; i < grid_size; ++i) {
    double x = lo + i * step;
    double d = 0.0;
    for (double s : samples) {
      double z = (x - s) / h;
      d += std::exp(-0.5 * z * z);
    }
    curve.grid[i] = x;
    curve.density[i] = d * kInvSqrt2Pi / (samples.size() * h);
  }
  return curve;
}

namespace {

json gains_to_json(const GainVector& g) {
  return json{{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}};
}

GainVector gains_from_json(const json& j) {
  return {j.at("kp").get<double>(), j.at("ki").get<double>(),
          j.at("kd").get<double>()};
}

json opt_to_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

std::optional<double> opt_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json metrics_to_json(const StepMetrics& m) {
  return json{{"rise_time_ms", opt_to_json(m.rise_time_ms)},
              {"overshoot_pct", m.overshoot_pct},
              {"settling_time_ms", opt_to_json(m.settling_time_ms)},
              {"steady_state_error_deg", m.steady_state_error_deg}};
}

StepMetrics metrics_from_json(const json& j) {
  StepMetrics m;
  m.rise_time_ms = opt_from_json(j.at("rise_time_ms"));
  m.overshoot_pct = j.at("overshoot_pct").get<double>();
  m.settling_time_ms = opt_from_json(j.at("settling_time_ms"));
  m.steady_state_error_deg = j.at("steady_state_error_deg").get<double>();
  return m;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

json trial_config_to_json(const TrialConfig& c) {
  return json{
      {"optimizer", to_string(c.optimizer)},
      {"eec",
       {{"id", c.eec.id},
        {"label", c.eec.label},
        {"de_mutation_f", c.eec.de_mutation_f},
        {"de_crossover_cr", c.eec.de_crossover_cr},
        {"bo_xi", c.eec.bo_xi}}},
      {"initial_state",
       {{"id", c.initial_state.id},
        {"label", c.initial_state.label},
        {"gains", gains_to_json(c.initial_state.gains)}}},
      {"robot", to_string(c.robot)},
      {"seed", c.seed},
      {"budget", c.budget},
      {"objective_threshold_ms", c.objective_threshold_ms},
      {"constraints",
       {{"max_overshoot_pct", c.constraints.max_overshoot_pct},
        {"max_rise_time_ms", c.constraints.max_rise_time_ms}}},
      {"bounds",
       {{"lo", gains_to_json(c.bounds.lo)}, {"hi", gains_to_json(c.bounds.hi)}}}};
}

TrialConfig trial_config_from_json(const json& j) {
  TrialConfig c;
  c.optimizer = optimizer_from_string(j.at("optimizer").get<std::string>());
  const json& eec = j.at("eec");
  c.eec = {eec.at("id").get<int>(), eec.at("label").get<std::string>(),
           eec.at("de_mutation_f").get<double>(),
           eec.at("de_crossover_cr").get<double>(), eec.at("bo_xi").get<double>()};
  const json& init = j.at("initial_state");
  c.initial_state = {init.at("id").get<int>(), init.at("label").get<std::string>(),
                     gains_from_json(init.at("gains"))};
  c.robot = robot_from_string(j.at("robot").get<std::string>());
  c.seed = j.at("seed").get<std::uint64_t>();
  c.budget = j.at("budget").get<int>();
  c.objective_threshold_ms = j.at("objective_threshold_ms").get<double>();
  const json& cons = j.at("constraints");
  c.constraints = {cons.at("max_overshoot_pct").get<double>(),
                   cons.at("max_rise_time_ms").get<double>()};
  const json& b = j.at("bounds");
  c.bounds = {gains_from_json(b.at("lo")), gains_from_json(b.at("hi"))};
  return c;
}

void write_trial_log_csv(const TrialResult& result, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "eval_index,kp,ki,kd,rise_time_ms,overshoot_pct,settling_time_ms,"
         "sse_deg,accepted,fitness\n";
  auto opt6 = [](const std::optional<double>& v) {
    return v ? fmt6(*v) : std::string();
  };
  for (const TrialEval& ev : result.history) {
    out << ev.eval_index << ',' << fmt6(ev.gains.kp) << ',' << fmt6(ev.gains.ki)
        << ',' << fmt6(ev.gains.kd) << ',' << opt6(ev.metrics.rise_time_ms) << ','
        << fmt6(ev.metrics.overshoot_pct) << ','
        << opt6(ev.metrics.settling_time_ms) << ','
        << fmt6(ev.metrics.steady_state_error_deg) << ',' << (ev.accepted ? 1 : 0)
        << ',' << fmt6(ev.fitness) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_results_json(const std::vector<TrialResult>& results,
                        const std::string& path) {
  json arr = json::array();
  for (const TrialResult& r : results) {
    json history = json::array();
    for (const TrialEval& ev : r.history) {
      history.push_back(json{{"eval_index", ev.eval_index},
                             {"gains", gains_to_json(ev.gains)},
                             {"metrics", metrics_to_json(ev.metrics)},
                             {"accepted", ev.accepted},
                             {"fitness", ev.fitness}});
    }
    arr.push_back(json{{"config", trial_config_to_json(r.config)},
                       {"converged", r.converged},
                       {"failed", r.failed},
                       {"failure", r.failure},
                       {"eval_count", r.eval_count},
                       {"wall_time_ms", r.wall_time_ms},
                       {"best_gains", gains_to_json(r.best_gains)},
                       {"best_metrics", metrics_to_json(r.best_metrics)},
                       {"history", std::move(history)}});
  }
  std::ofstream out = open_out(path);
  out << arr.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<TrialResult> read_results_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  json arr = json::parse(in);

  std::vector<TrialResult> results;
  for (const json& j : arr) {
    TrialResult r;
    r.config = trial_config_from_json(j.at("config"));
    r.converged = j.at("converged").get<bool>();
    r.failed = j.at("failed").get<bool>();
    r.failure = j.at("failure").get<std::string>();
    r.eval_count = j.at("eval_count").get<int>();
    r.wall_time_ms = j.at("wall_time_ms").get<double>();
    r.best_gains = gains_from_json(j.at("best_gains"));
    r.best_metrics = metrics_from_json(j.at("best_metrics"));
    for (const json& e : j.at("history")) {
      r.history.push_back({e.at("eval_index").get<int>(),
                           gains_from_json(e.at("gains")),
                           metrics_from_json(e.at("metrics")),
                           e.at("accepted").get<bool>(),
                           e.at("fitness").get<double>()});
    }
    results.push_back(std::move(r));
  }
  return results;
}

void write_summary_csv(const std::vector<SummaryRow>& rows,
                       const std::string& path) {
  std::ofstream out = open_out(path);
  out << "robot,eec_id,eec_label,initial_state,optimizer,total_runs,"
         "converged_runs,convergence_pct,best_settling_ms,best_rise_ms,"
         "best_overshoot_pct,eval_count_at_convergence\n";
  for (const SummaryRow& r : rows) {
    out << to_string(r.robot) << ',' << r.eec_id << ',' << r.eec_label << ','
        << r.initial_state_id << ',' << to_string(r.optimizer) << ','
        << r.total_runs << ',' << r.converged_runs << ','
        << fmt6(r.convergence_pct) << ','
        << (r.best_settling_ms ? fmt6(*r.best_settling_ms) : "") << ','
        << (r.best_rise_ms ? fmt6(*r.best_rise_ms) : "") << ','
        << (r.best_overshoot_pct ? fmt6(*r.best_overshoot_pct) : "") << ','
        << (r.eval_count_at_convergence
                ? std::to_string(*r.eval_count_at_convergence)
                : "")
        << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_kde_svg(const std::vector<KdeSeries>& series, const std::string& title,
                   const std::string& x_label, const std::string& path) {
  const double width = 640, height = 400;
  const double ml = 60, mr = 20, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;

  struct Plotted {
    const KdeSeries* src;
    KdeCurve curve;
    double mean;
  };
  std::vector<Plotted> plotted;
  double x_min = 0, x_max = 1, y_max = 0;
  bool have_range = false;
  for (const KdeSeries& s : series) {
    if (s.samples.empty()) continue;
    double mean = 0.0;
    for (double v : s.samples) mean += v;
    mean /= s.samples.size();

    KdeCurve curve;
    try {
      curve = kde(s.samples);
    } catch (const std::invalid_argument&) {
      // Too few or degenerate samples: plot the mean marker only.
      plotted.push_back({&s, {}, mean});
      continue;
    }
    for (double d : curve.density) y_max = std::max(y_max, d);
    if (!have_range) {
      x_min = curve.grid.front();
      x_max = curve.grid.back();
      have_range = true;
    } else {
      x_min = std::min(x_min, curve.grid.front());
      x_max = std::max(x_max, curve.grid.back());
    }
    plotted.push_back({&s, std::move(curve), mean});
  }
  if (y_max <= 0) y_max = 1.0;
  if (!have_range) {
    for (const Plotted& p : plotted) {
      x_min = std::min(x_min, p.mean - 1.0);
      x_max = std::max(x_max, p.mean + 1.0);
    }
  }

  auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  auto sy = [&](double y) { return mt + ph - y / y_max * ph; };

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << width << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << x_label << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    double x = x_min + (x_max - x_min) * i / 4.0;
    out << "<text x=\"" << fmt6(sx(x)) << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"10\">"
        << fmt6(x) << "</text>\n";
  }

  int legend_y = static_cast<int>(mt) + 8;
  for (const Plotted& p : plotted) {
    if (!p.curve.grid.empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << p.src->color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < p.curve.grid.size(); ++i) {
        out << fmt6(sx(p.curve.grid[i])) << ',' << fmt6(sy(p.curve.density[i]));
        if (i + 1 < p.curve.grid.size()) out << ' ';
      }
      out << "\"/>\n";
    }
    out << "<line x1=\"" << fmt6(sx(p.mean)) << "\" y1=\"" << mt << "\" x2=\""
        << fmt6(sx(p.mean)) << "\" y2=\"" << mt + ph << "\" stroke=\""
        << p.src->color << "\" stroke-dasharray=\"5,4\"/>\n";
    out << "<text x=\"" << ml + pw - 8 << "\" y=\"" << legend_y
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
           "fill=\""
        << p.src->color << "\">" << p.src->label << "</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace autotune
