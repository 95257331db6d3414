#include "belldim/ensemble.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "belldim/quantum.hpp"
#include "belldim/rng.hpp"

namespace belldim {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BELLDIM_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

EnsembleResult ensemble_run(const EnsembleOptions& opts) {
  if (opts.trials < 1) throw std::invalid_argument("trials must be >= 1");

  State state = builtin_state(opts.state, opts.d, opts.parties);
  EnsembleResult res;
  res.exact.resize(opts.trials);
  if (opts.with_grouped) res.grouped_exact.resize(opts.trials);

  auto run_trial = [&](int trial) {
    QuantumScenario scenario;
    scenario.state = state;
    for (int p = 0; p < opts.parties; ++p) {
      std::uint64_t s = derive_seed(
          opts.seed, {static_cast<std::uint64_t>(opts.d),
                      static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(p)});
      scenario.measurements.push_back(random_measurement_set(opts.d, opts.d, s));
    }
    Correlation c = born_correlation(scenario);
    res.exact[trial] = dimension_bound(c).bound;
    if (opts.with_grouped) res.grouped_exact[trial] = dimension_bound_grouped(c).bound;
  };

  int workers = std::min(resolve_workers(opts.workers), opts.trials);
  if (workers <= 1) {
    for (int t = 0; t < opts.trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (int t = next.fetch_add(1); t < opts.trials; t = next.fetch_add(1))
            run_trial(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Reduce in trial order regardless of how the pool scheduled the work.
  for (int t = 0; t < opts.trials; ++t) {
    res.mean_exact += res.exact[t];
    res.mean_rounded += rounded_bound(res.exact[t]);
    if (opts.with_grouped) {
      double g = res.grouped_exact[t];
      res.mean_grouped_exact += g;
      res.mean_grouped_rounded += rounded_bound(g);
      if (res.exact[t] - g >= kOutperformThreshold) ++res.outperform_exact;
      if (rounded_bound(res.exact[t]) > rounded_bound(g)) ++res.outperform_rounded;
    }
  }
  res.mean_exact /= opts.trials;
  res.mean_rounded /= opts.trials;
  if (opts.with_grouped) {
    res.mean_grouped_exact /= opts.trials;
    res.mean_grouped_rounded /= opts.trials;
  }
  return res;
}

}  // namespace belldim
