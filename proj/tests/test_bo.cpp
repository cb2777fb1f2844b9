#include "autotune/bo.hpp"

#include <cmath>
#include <limits>

#include "doctest.h"

using namespace autotune;

namespace {

std::vector<std::array<double, 3>> random_points(int n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::array<double, 3>> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng), u(rng)};
  return pts;
}

Objective sphere(const GainVector& center) {
  return [center](const GainVector& g) {
    double d = (g.kp - center.kp) * (g.kp - center.kp) +
               (g.ki - center.ki) * (g.ki - center.ki) +
               (g.kd - center.kd) * (g.kd - center.kd);
    return ObjectiveSample{d, false};
  };
}

}  // namespace

TEST_CASE("gp: single observation interpolates") {
  BoConfig cfg;
  GpModel model = GpModel::fit({{0.5, 0.5, 0.5}}, {1234.0}, cfg);
  auto [mean, std] = model.predict({0.5, 0.5, 0.5});
  CHECK(mean == doctest::Approx(1234.0).epsilon(1e-6));
  CHECK(std >= 0.0);
  CHECK(std < 1e-3);
}

TEST_CASE("gp: duplicate inputs are averaged") {
  BoConfig cfg;
  GpModel model = GpModel::fit({{0.2, 0.2, 0.2}, {0.2, 0.2, 0.2}}, {1.0, 3.0}, cfg);
  CHECK(model.train_inputs().size() == 1);
  auto [mean, std] = model.predict({0.2, 0.2, 0.2});
  CHECK(mean == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("gp: interpolates 20 random points within 1e-4") {
  Rng rng(21);
  auto xs = random_points(20, rng);
  std::uniform_real_distribution<double> ty(500.0, 6000.0);
  std::vector<double> ys;
  for (int i = 0; i < 20; ++i) ys.push_back(ty(rng));

  GpModel model = GpModel::fit(xs, ys, {});
  for (int i = 0; i < 20; ++i) {
    auto [mean, std] = model.predict(xs[i]);
    CHECK(std::abs(mean - ys[i]) < 1e-4 * std::abs(ys[i]) + 1e-4);
  }
}

TEST_CASE("gp: far from data the posterior reverts to the prior") {
  // Points clustered in a corner; probe the opposite corner, >= 10 length
  // scales away in normalized units.
  BoConfig cfg;
  std::vector<std::array<double, 3>> xs{{0.0, 0.0, 0.0}, {0.02, 0.0, 0.0}};
  std::vector<double> ys{10.0, 12.0};
  GpModel model = GpModel::fit(xs, ys, cfg);
  auto [mean, std] = model.predict({3.0, 3.0, 3.0});
  // In standardized units: mean -> 0 (the target mean), std -> sqrt(sv).
  CHECK(std::abs(mean - 11.0) < 1e-3);
  double scale = 1.0;  // target sd = 1 for {10, 12}
  CHECK(std::abs(std / scale - std::sqrt(cfg.signal_variance)) < 1e-3);
}

TEST_CASE("gp: std never negative over 1000 random probes") {
  Rng rng(33);
  auto xs = random_points(40, rng);
  std::vector<double> ys(40);
  std::uniform_real_distribution<double> ty(-5.0, 5.0);
  for (double& y : ys) y = ty(rng);
  GpModel model = GpModel::fit(xs, ys, {});
  for (const auto& p : random_points(1000, rng)) CHECK(model.predict(p).std >= 0.0);
}

TEST_CASE("expected improvement: degenerate closed form") {
  CHECK(expected_improvement(5.0, 0.0, 10.0, 1.0) == doctest::Approx(4.0));
  CHECK(expected_improvement(15.0, 0.0, 10.0, 1.0) == 0.0);
}

TEST_CASE("expected improvement: mean at best with xi 0 equals phi(0)") {
  CHECK(expected_improvement(10.0, 1.0, 10.0, 0.0) ==
        doctest::Approx(0.3989422804).epsilon(1e-8));
}

TEST_CASE("expected improvement: nonnegative and non-increasing in xi") {
  Rng rng(8);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::uniform_real_distribution<double> s(0.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    double mean = u(rng), std = s(rng), best = u(rng);
    double xi1 = s(rng) / 10.0, xi2 = xi1 + s(rng) / 10.0;
    double e1 = expected_improvement(mean, std, best, xi1);
    double e2 = expected_improvement(mean, std, best, xi2);
    CHECK(e1 >= 0.0);
    CHECK(e2 <= e1 + 1e-12);
  }
}

TEST_CASE("propose_next: large xi pushes away from a lone training point") {
  BoConfig cfg;
  cfg.xi = 50.0;
  GainBounds bounds;
  int far = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GpModel model = GpModel::fit({{0.5, 0.5, 0.5}}, {1000.0}, cfg);
    Rng rng = make_rng(seed, "test");
    GainVector g = propose_next(model, bounds, cfg, 1000.0, rng);
    auto u = bounds.normalize(g);
    double d = 0.0;
    for (int j = 0; j < 3; ++j)
      d += (u[j] - 0.5) * (u[j] - 0.5);
    if (std::sqrt(d) >= cfg.kernel_length_scale) ++far;
  }
  CHECK(far >= 9);
}

TEST_CASE("propose_next: candidate_count 1 returns that candidate; deterministic") {
  BoConfig cfg;
  cfg.candidate_count = 1;
  GpModel model = GpModel::fit({{0.5, 0.5, 0.5}}, {1000.0}, cfg);
  GainBounds bounds;

  Rng rng1 = make_rng(5, "test");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // With no training-point perturbation win, the single uniform draw can
  // still lose to the perturbed incumbent; just check determinism and bounds.
  GainVector a = propose_next(model, bounds, cfg, 1000.0, rng1);
  Rng rng2 = make_rng(5, "test");
  GainVector b = propose_next(model, bounds, cfg, 1000.0, rng2);
  CHECK(a == b);
  CHECK(bounds.contains(a));
}

TEST_CASE("bo_run: budget 1 evaluates only the initial state") {
  BoConfig cfg;
  cfg.budget = 1;
  OptRun run = bo_run(sphere({12.0, 0.5, 0.5}), {}, cfg, {20.0, 0.05, 0.05}, 0);
  CHECK(run.eval_count == 1);
  CHECK(run.history.size() == 1);
  CHECK(run.history[0].gains == GainVector{20.0, 0.05, 0.05});
}

TEST_CASE("bo_run: improves on the sphere for >= 9/10 seeds") {
  BoConfig cfg;
  cfg.budget = 40;  // plenty for a 3-dim sphere
  GainVector init{20.0, 0.05, 0.05};
  GainVector center{12.0, 0.5, 0.5};
  double init_fitness = sphere(center)(init).fitness;
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    OptRun run = bo_run(sphere(center), {}, cfg, init, seed);
    if (run.best_fitness < init_fitness) ++improved;
    CHECK(run.eval_count <= cfg.budget);
    double best = std::numeric_limits<double>::infinity();
    for (const EvalRecord& rec : run.history) {
      CHECK(GainBounds{}.contains(rec.gains));
      best = std::min(best, rec.fitness);
    }
    CHECK(best == run.best_fitness);
  }
  CHECK(improved >= 9);
}

TEST_CASE("bo_run: same seed twice gives identical history") {
  BoConfig cfg;
  cfg.budget = 25;
  OptRun a = bo_run(sphere({12.0, 0.5, 0.5}), {}, cfg, {20.0, 0.05, 0.05}, 6);
  OptRun b = bo_run(sphere({12.0, 0.5, 0.5}), {}, cfg, {20.0, 0.05, 0.05}, 6);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].gains == b.history[i].gains);
    CHECK(a.history[i].fitness == b.history[i].fitness);
  }
}

TEST_CASE("bo_run: non-finite fitness raises") {
  Objective obj = [](const GainVector&) {
    return ObjectiveSample{std::numeric_limits<double>::infinity(), false};
  };
  BoConfig cfg;
  cfg.budget = 5;
  CHECK_THROWS_AS(bo_run(obj, {}, cfg, {20.0, 0.05, 0.05}, 0), ObjectiveError);
}
