#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "belldim/bounds.hpp"

namespace belldim {

/// Threshold for counting the multiparty bound as strictly better than the
/// grouped one on the exact values.
inline constexpr double kOutperformThreshold = 1e-3;

struct EnsembleOptions {
  std::string state = "maxent";  // builtin state name
  int d = 2;
  int parties = 3;
  int trials = 100;
  std::uint64_t seed = 0;
  bool with_grouped = false;
  int workers = 0;  // 0: BELLDIM_WORKERS env var, then hardware concurrency
};

struct EnsembleResult {
  std::vector<double> exact;          // per-trial dimension bound
  std::vector<double> grouped_exact;  // empty unless with_grouped
  double mean_exact = 0.0;
  double mean_rounded = 0.0;
  double mean_grouped_exact = 0.0;
  double mean_grouped_rounded = 0.0;
  int outperform_exact = 0;    // exact - grouped >= threshold
  int outperform_rounded = 0;  // rounded strictly larger
};

/// Repeats: sample one GOE eigenbasis measurement set per party (d settings
/// each), simulate the Born correlation of the named state, bound Alice's
/// dimension. Trials run on a worker pool; per-trial derived seeds and a
/// fixed reduction order keep results independent of scheduling.
EnsembleResult ensemble_run(const EnsembleOptions& opts);

int resolve_workers(int requested);

}  // namespace belldim
