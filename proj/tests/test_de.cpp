#include "autotune/de.hpp"

#include <cmath>

#include "doctest.h"

using namespace autotune;

namespace {

Population make_pop(std::vector<GainVector> members) {
  Population pop;
  pop.members = std::move(members);
  pop.fitnesses.assign(pop.members.size(), 0.0);
  return pop;
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

TEST_CASE("mutate_rand1: degenerate population is identity") {
  GainVector v{10.0, 0.5, 0.5};
  Population pop = make_pop({v, v, v, v, v});
  Rng rng(1);
  GainVector donor = mutate_rand1(pop, 0, 0.6, {}, rng);
  CHECK(donor == v);
}

TEST_CASE("mutate_rand1: hand-checked arithmetic") {
  // Population of exactly 4 with target 0: r1,r2,r3 is a permutation of 1,2,3.
  // Members 1..3 chosen so every permutation gives a distinct, checkable donor.
  Population pop = make_pop({{2.0, 0.5, 0.5},
                             {10.0, 0.5, 0.5},
                             {12.0, 0.6, 0.4},
                             {8.0, 0.4, 0.6}});
  Rng rng(7);
  GainVector donor = mutate_rand1(pop, 0, 0.6, {}, rng);

  bool matches_some_permutation = false;
  int idx[3] = {1, 2, 3};
  for (int a : idx)
    for (int b : idx)
      for (int c : idx) {
        if (a == b || b == c || a == c) continue;
        GainVector expect{
            pop.members[a].kp + 0.6 * (pop.members[b].kp - pop.members[c].kp),
            pop.members[a].ki + 0.6 * (pop.members[b].ki - pop.members[c].ki),
            pop.members[a].kd + 0.6 * (pop.members[b].kd - pop.members[c].kd)};
        GainBounds bounds;
        expect = bounds.clip(expect);
        if (std::abs(expect.kp - donor.kp) < 1e-12 &&
            std::abs(expect.ki - donor.ki) < 1e-12 &&
            std::abs(expect.kd - donor.kd) < 1e-12)
          matches_some_permutation = true;
      }
  CHECK(matches_some_permutation);

  // The specific spec example: x_r1=(10,.5,.5), x_r2=(12,.6,.4), x_r3=(8,.4,.6)
  GainVector x1{10.0, 0.5, 0.5}, x2{12.0, 0.6, 0.4}, x3{8.0, 0.4, 0.6};
  GainVector expect{x1.kp + 0.6 * (x2.kp - x3.kp), x1.ki + 0.6 * (x2.ki - x3.ki),
                    x1.kd + 0.6 * (x2.kd - x3.kd)};
  CHECK(expect.kp == doctest::Approx(12.4));
  CHECK(expect.ki == doctest::Approx(0.62));
  CHECK(expect.kd == doctest::Approx(0.38));
}

TEST_CASE("mutate_rand1: donor clipped to bounds") {
  GainVector top{25.0, 1.0, 1.0};
  Population pop = make_pop({{5, .5, .5}, top, {20.0, 0.8, 0.9}, {10.0, 0.2, 0.1}});
  Rng rng(3);
  GainBounds bounds;
  for (int i = 0; i < 50; ++i) {
    GainVector donor = mutate_rand1(pop, 0, 1.5, bounds, rng);
    CHECK(bounds.contains(donor));
  }
}

TEST_CASE("mutate_rand1: requires 4 members") {
  Population pop = make_pop({{1, 0, 0}, {2, 0, 0}, {3, 0, 0}});
  Rng rng(1);
  CHECK_THROWS_AS(mutate_rand1(pop, 0, 0.6, {}, rng), std::invalid_argument);
}

TEST_CASE("crossover_bin: cr=0 changes exactly one gene") {
  GainVector target{10.0, 0.2, 0.8}, donor{20.0, 0.6, 0.4};
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    GainVector trial = crossover_bin(target, donor, 0.0, rng);
    int changed = (trial.kp != target.kp) + (trial.ki != target.ki) +
                  (trial.kd != target.kd);
    CHECK(changed == 1);
  }
}

TEST_CASE("crossover_bin: cr=1 copies the donor") {
  GainVector target{10.0, 0.2, 0.8}, donor{20.0, 0.6, 0.4};
  Rng rng(5);
  CHECK(crossover_bin(target, donor, 1.0, rng) == donor);
}

TEST_CASE("crossover_bin: donor == target is a fixed point") {
  GainVector v{10.0, 0.2, 0.8};
  Rng rng(5);
  for (double cr : {0.0, 0.3, 0.7, 1.0}) CHECK(crossover_bin(v, v, cr, rng) == v);
}

TEST_CASE("crossover_bin: donor-gene frequency matches cr") {
  // Mark donor genes with distinct values, count takeovers per dimension.
  GainVector target{0.0, 0.0, 0.0}, donor{1.0, 1.0, 1.0};
  const double cr = 0.6;
  const int draws = 10000;
  Rng rng(17);
  long non_forced_donor = 0;
  long forced_ok = 0;
  for (int i = 0; i < draws; ++i) {
    GainVector trial = crossover_bin(target, donor, cr, rng);
    int donor_genes = (trial.kp == 1.0) + (trial.ki == 1.0) + (trial.kd == 1.0);
    if (donor_genes >= 1) ++forced_ok;
    // The forced gene is always a donor gene, so the two non-forced
    // dimensions took donor_genes - 1 donor genes between them.
    non_forced_donor += donor_genes - 1;
  }
  CHECK(forced_ok == draws);  // every trial has >= 1 donor gene
  const double frac = static_cast<double>(non_forced_donor) / (2.0 * draws);
  const double se = std::sqrt(cr * (1.0 - cr) / (2.0 * draws));
  CHECK(std::abs(frac - cr) <= 3.0 * se);
}

TEST_CASE("de_run: budget == pop_size does init only") {
  DeConfig cfg;
  cfg.pop_size = 15;
  cfg.budget = 15;
  int calls = 0;
  Objective obj = [&](const GainVector& g) {
    ++calls;
    return sphere({12.0, 0.5, 0.5})(g);
  };
  OptRun run = de_run(obj, {}, cfg, {20.0, 0.05, 0.05}, 0);
  CHECK(calls == 15);
  CHECK(run.eval_count == 15);
  CHECK_FALSE(run.converged);
}

TEST_CASE("de_run: improves over the initial state on every seed 0-9") {
  DeConfig cfg;  // defaults: pop 15, budget 150
  GainVector init{20.0, 0.05, 0.05};
  GainVector center{12.0, 0.5, 0.5};
  double init_fitness = sphere(center)(init).fitness;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    OptRun run = de_run(sphere(center), {}, cfg, init, seed);
    CHECK(run.best_fitness < init_fitness);
    CHECK(run.eval_count == 150);
  }
}

TEST_CASE("de_run: same seed gives identical history") {
  DeConfig cfg;
  OptRun a = de_run(sphere({12.0, 0.5, 0.5}), {}, cfg, {20.0, 0.05, 0.05}, 4);
  OptRun b = de_run(sphere({12.0, 0.5, 0.5}), {}, cfg, {20.0, 0.05, 0.05}, 4);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].gains == b.history[i].gains);
    CHECK(a.history[i].fitness == b.history[i].fitness);
  }
}

TEST_CASE("de_run: best-so-far fitness is non-increasing; proposals in box") {
  GainBounds bounds;
  OptRun run = de_run(sphere({5.0, 0.9, 0.1}), bounds, {}, {20.0, 0.05, 0.05}, 2);
  double best = std::numeric_limits<double>::infinity();
  for (const EvalRecord& rec : run.history) {
    CHECK(bounds.contains(rec.gains));
    best = std::min(best, rec.fitness);
  }
  CHECK(best == run.best_fitness);
  CHECK(run.eval_count <= 150);
}

TEST_CASE("de_run: convergence stops mid-generation") {
  DeConfig cfg;
  int calls = 0;
  Objective obj = [&](const GainVector& g) {
    ++calls;
    return ObjectiveSample{1.0, calls == 20};  // fires inside generation 1
  };
  OptRun run = de_run(obj, {}, cfg, {20.0, 0.05, 0.05}, 0);
  CHECK(run.converged);
  CHECK(run.eval_count == 20);
}

TEST_CASE("de_run: non-finite fitness raises with the offending gains") {
  Objective obj = [](const GainVector&) {
    return ObjectiveSample{std::numeric_limits<double>::quiet_NaN(), false};
  };
  CHECK_THROWS_AS(de_run(obj, {}, {}, {20.0, 0.05, 0.05}, 0), ObjectiveError);
}

TEST_CASE("de config validation") {
  DeConfig bad;
  bad.pop_size = 3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.budget = 10;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.mutation_f = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
