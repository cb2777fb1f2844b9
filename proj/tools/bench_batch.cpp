// Benchmark: serial reference run_batch vs the OpenMP path on a replicated
// default trial matrix. Verifies both paths agree before timing.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "autotune/config.hpp"
#include "autotune/report.hpp"

using namespace autotune;
using Clock = std::chrono::steady_clock;

namespace {

double time_batch(const std::vector<TrialConfig>& configs,
                  const PlantRegistry& registry, int parallelism,
                  std::vector<TrialResult>& out) {
  auto t0 = Clock::now();
  out = run_batch(configs, registry, parallelism);
  auto t1 = Clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

bool same_outcomes(const std::vector<TrialResult>& a,
                   const std::vector<TrialResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].converged != b[i].converged || a[i].eval_count != b[i].eval_count ||
        !(a[i].best_gains == b[i].best_gains))
      return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int seeds = argc > 1 ? std::atoi(argv[1]) : 5;
  int threads = argc > 2 ? std::atoi(argv[2]) : 4;
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#else
  std::cout << "(built without OpenMP; parallel path degrades to serial)\n";
#endif

  WorkbenchConfig cfg = default_config();
  cfg.seeds.clear();
  for (int s = 0; s < seeds; ++s) cfg.seeds.push_back(s);
  std::vector<TrialConfig> configs = enumerate_trials(cfg);
  std::cout << configs.size() << " trials (" << seeds << " seeds), " << threads
            << " threads\n";

  std::vector<TrialResult> serial, parallel;
  double t_serial = time_batch(configs, cfg.registry, 1, serial);
  double t_parallel = time_batch(configs, cfg.registry, threads, parallel);

  if (!same_outcomes(serial, parallel)) {
    std::cerr << "FAIL: serial and parallel outcomes differ\n";
    return 1;
  }

  std::cout << "serial:   " << fmt6(t_serial) << " s\n";
  std::cout << "parallel: " << fmt6(t_parallel) << " s\n";
  std::cout << "speedup:  " << fmt6(t_serial / t_parallel) << "x\n";
  return 0;
}
