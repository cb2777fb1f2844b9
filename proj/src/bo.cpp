#include "autotune/bo.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace autotune {

void BoConfig::validate() const {
  if (!(xi >= 0.0)) throw std::invalid_argument("bo: xi must be >= 0");
  if (budget < 1) throw std::invalid_argument("bo: budget must be >= 1");
  if (!(kernel_length_scale > 0.0))
    throw std::invalid_argument("bo: kernel_length_scale must be > 0");
  if (!(signal_variance > 0.0))
    throw std::invalid_argument("bo: signal_variance must be > 0");
  if (!(jitter > 0.0)) throw std::invalid_argument("bo: jitter must be > 0");
  if (candidate_count < 1)
    throw std::invalid_argument("bo: candidate_count must be >= 1");
}

namespace {

double sq_dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double s = 0.0;
  for (int j = 0; j < 3; ++j) {
    double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

GpModel GpModel::fit(const std::vector<std::array<double, 3>>& inputs,
                     const std::vector<double>& targets, const BoConfig& config) {
  config.validate();
  if (inputs.empty() || inputs.size() != targets.size())
    throw std::invalid_argument("gp_fit: need >= 1 observation with matching targets");

  // Collapse exact duplicate inputs by averaging their targets.
  std::map<std::array<double, 3>, std::pair<double, int>> grouped;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    auto& [sum, count] = grouped[inputs[i]];
    sum += targets[i];
    ++count;
  }

  GpModel model;
  model.length_scale_ = config.kernel_length_scale;
  model.signal_variance_ = config.signal_variance;
  std::vector<double> y;
  for (const auto& [x, acc] : grouped) {
    model.inputs_.push_back(x);
    y.push_back(acc.first / acc.second);
  }
  model.n_ = static_cast<int>(model.inputs_.size());

  // Standardize targets; a constant target vector keeps unit scale.
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= y.size();
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= y.size();
  model.target_mean_ = mean;
  model.target_scale_ = var > 0.0 ? std::sqrt(var) : 1.0;

  const int n = model.n_;
  Eigen::MatrixXd kernel(n, n);
  const double inv_two_ls2 = 1.0 / (2.0 * model.length_scale_ * model.length_scale_);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double k = model.signal_variance_ *
                 std::exp(-sq_dist(model.inputs_[i], model.inputs_[j]) * inv_two_ls2);
      kernel(i, j) = k;
      kernel(j, i) = k;
    }
    kernel(i, i) += config.jitter;
  }

  Eigen::LLT<Eigen::MatrixXd> llt(kernel);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "gp_fit: Cholesky factorization failed; increase jitter");

  Eigen::VectorXd y_std(n);
  for (int i = 0; i < n; ++i)
    y_std(i) = (y[i] - model.target_mean_) / model.target_scale_;
  Eigen::VectorXd alpha = llt.solve(y_std);

  // Keep the lower triangle row-major for the forward solve in predict().
  Eigen::MatrixXd lower = llt.matrixL();
  std::vector<double> row_major(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) row_major[i * n + j] = lower(i, j);
  model.chol_ = std::move(row_major);
  model.alpha_.assign(alpha.data(), alpha.data() + n);
  return model;
}

GpModel::Prediction GpModel::predict(const std::array<double, 3>& x) const {
  const int n = n_;
  const double inv_two_ls2 = 1.0 / (2.0 * length_scale_ * length_scale_);

  std::vector<double> k_star(n);
  for (int i = 0; i < n; ++i)
    k_star[i] = signal_variance_ * std::exp(-sq_dist(inputs_[i], x) * inv_two_ls2);

  double mean_std = 0.0;
  for (int i = 0; i < n; ++i) mean_std += k_star[i] * alpha_[i];

  // v = L^-1 k*, forward substitution.
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    double s = k_star[i];
    for (int j = 0; j < i; ++j) s -= chol_[i * n + j] * v[j];
    v[i] = s / chol_[i * n + i];
  }
  double var = signal_variance_;
  for (int i = 0; i < n; ++i) var -= v[i] * v[i];
  var = std::max(var, 0.0);

  Prediction p;
  p.mean = target_mean_ + target_scale_ * mean_std;
  p.std = target_scale_ * std::sqrt(var);
  return p;
}

double expected_improvement(double mean, double std, double best_fitness,
                            double xi) {
  const double a = best_fitness - mean - xi;
  if (std <= 0.0) return std::max(a, 0.0);
  const double z = a / std;
  return std::max(0.0, a * normal_cdf(z) + std * normal_pdf(z));
}

GainVector propose_next(const GpModel& model, const GainBounds& bounds,
                        const BoConfig& config, double best_fitness, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 0.05);

  std::array<double, 3> best_x{};
  double best_ei = -1.0;
  auto consider = [&](const std::array<double, 3>& x) {
    auto [mean, std] = model.predict(x);
    double ei = expected_improvement(mean, std, best_fitness, config.xi);
    if (ei > best_ei) {  // strict: ties go to the earliest candidate
      best_ei = ei;
      best_x = x;
    }
  };

  for (int c = 0; c < config.candidate_count; ++c)
    consider({uniform(rng), uniform(rng), uniform(rng)});

  for (const auto& x0 : model.train_inputs()) {
    std::array<double, 3> x = x0;
    for (double& xi_j : x) xi_j = std::clamp(xi_j + gauss(rng), 0.0, 1.0);
    consider(x);
  }
  return bounds.denormalize(best_x);
}

OptRun bo_run(const Objective& objective, const GainBounds& bounds,
              const BoConfig& config, const GainVector& initial_state,
              std::uint64_t seed) {
  config.validate();
  if (!bounds.contains(initial_state))
    throw std::invalid_argument("bo_run: initial_state outside bounds");

  Rng rng = make_rng(seed, "bo");

  OptRun run;
  run.best_fitness = std::numeric_limits<double>::infinity();

  std::vector<std::array<double, 3>> xs;
  std::vector<double> ys;

  auto evaluate_at = [&](const GainVector& g) {
    ObjectiveSample sample = objective(g);
    if (!std::isfinite(sample.fitness)) {
      std::ostringstream msg;
      msg << "bo: objective returned non-finite fitness at gains (" << g.kp
          << ", " << g.ki << ", " << g.kd << ")";
      throw ObjectiveError(msg.str());
    }
    bool improved = sample.fitness < run.best_fitness;
    if (improved) {
      run.best_fitness = sample.fitness;
      run.best_gains = g;
    }
    run.history.push_back({g, sample.fitness, improved});
    ++run.eval_count;
    xs.push_back(bounds.normalize(g));
    ys.push_back(sample.fitness);
    return sample.converged;
  };

  if (evaluate_at(initial_state)) {
    run.converged = true;
    return run;
  }

  while (run.eval_count < config.budget) {
    GpModel model = GpModel::fit(xs, ys, config);
    GainVector next = propose_next(model, bounds, config, run.best_fitness, rng);
    if (evaluate_at(next)) {
      run.converged = true;
      return run;
    }
  }
  return run;
}

}  // namespace autotune
