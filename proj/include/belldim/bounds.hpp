#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "belldim/correlation.hpp"

namespace belldim {

/// Non-negative weights over (y_1..y_k, b_1..b_k) for k Rogers, stored in the
/// same settings-major layout as Correlation.
struct WeightTensor {
  std::vector<int> settings;
  std::vector<int> outcomes;
  std::vector<double> values;

  int rogers() const { return static_cast<int>(settings.size()); }
};

/// How the freedom to pick the Roger visiting order is spent.
///   kFixed             one caller-supplied order for every term
///   kExhaustiveGlobal  one order per (x,x') pair, minimizing the pair sum
///   kExhaustivePerTerm each (a,a') term minimized over orders independently;
///                      valid because every order upper-bounds the same
///                      fidelity, and the strongest choice overall
enum class OrderingStrategy { kFixed, kExhaustiveGlobal, kExhaustivePerTerm };

struct AmsOptions {
  OrderingStrategy strategy = OrderingStrategy::kExhaustivePerTerm;
  std::vector<int> fixed_order;  // Bob labels 1..k; empty means identity
  double inf_threshold = 0.0;    // denominators below this count as zero

  /// Per-term ordering for up to 5 Bobs (120 orders), fixed identity beyond.
  static AmsOptions auto_for(int bob_count);
};

struct BoundReport {
  double bound = 0.0;        // +infinity when the denominator vanishes
  double denominator = 0.0;  // D = min_{x,x'} sum_{a,a'} AMS^2
  int target_party = 0;
  int argmin_x = 0;
  int argmin_x_prime = 0;
  int alice_outcomes = 0;
  std::vector<double> ams_terms;  // |A| x |A| row-major, at the argmin pair
  OrderingStrategy strategy = OrderingStrategy::kExhaustivePerTerm;
  std::vector<std::vector<int>> orderings;  // Bob labels; per term, or one entry
  bool grouped = false;

  bool infinite() const { return std::isinf(bound); }
  double rounded() const;
};

/// Alternating minimization and summation of sqrt(f*g): settings are chosen
/// adaptively on the visited history, outcomes are summed, Rogers visited in
/// the given order (slots 0..k-1). Zero-weight branches contribute zero.
double ams(const WeightTensor& f, const WeightTensor& g, std::span<const int> order);

/// Joint weight slice f(y,b) = p(a, b | x, y) of a Bell correlation.
WeightTensor weight_slice(const Correlation& c, int x, int a);
/// Weight slice p(b | x, y) of a prepare-and-distribute correlation.
WeightTensor pd_slice(const PDCorrelation& pd, int x);

/// min over full setting tuples y of sum_b sqrt(p(b|x,y) p(b|x',y)).
double fidelity_bound_trivial(const PDCorrelation& pd, int x, int x_prime);

/// AMS upper bound on F(rho_x, rho_x'), at least as strong as the trivial
/// bound for every ordering choice.
double fidelity_bound_ams(const PDCorrelation& pd, int x, int x_prime,
                          const AmsOptions& opts = {});

/// sum_{a,a'} AMS(sqrt(p(a,b|x,y) p(a',b|x',y)))^2, an upper bound on the
/// purity of the Bobs' joint reduced state. Works on joint weights
/// throughout; no conditioning on Alice's outcome probabilities.
double purity_bound(const Correlation& c, int x, int x_prime,
                    const AmsOptions& opts = {});

/// Lower bound on the Hilbert-space dimension of `target_party`: the inverse
/// of the purity bound minimized over all ordered setting pairs (x,x'),
/// equal pairs included. Infinite when the denominator is exactly zero (or
/// below opts.inf_threshold). Defaults to AmsOptions::auto_for the Bob count.
BoundReport dimension_bound(const Correlation& c, int target_party = 0,
                            std::optional<AmsOptions> opts = std::nullopt);

/// Bipartite comparison bound: all Bobs fused into one party with joint
/// settings and outcomes, so the single min is non-adaptive. Coincides with
/// dimension_bound when there is only one Bob.
BoundReport dimension_bound_grouped(const Correlation& c, int target_party = 0,
                                    double inf_threshold = 0.0);

/// Integer form of an exact bound; the small backoff absorbs float residue
/// sitting just above an integer.
double rounded_bound(double exact);

}  // namespace belldim
