#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace belldim {

inline constexpr double kDefaultNormTol = 1e-9;
inline constexpr double kDefaultNsTol = 1e-9;
inline constexpr double kClampTol = 1e-12;

/// Joint conditional distribution p(a, b_1..b_k | x, y_1..y_k) of a Bell
/// experiment with k+1 parties. Party 0 is Alice, party j >= 1 is Bob-j.
///
/// Dense settings-major layout: the flat index of (x, y_1..y_k, a, b_1..b_k)
/// is ((((x*|Y1|+y1)*|Y2|+y2)...)*|A|+a)*|B1|+b1)...*|Bk|+b_k, i.e. all
/// settings outermost in party order, then all outcomes in party order.
/// Outcomes of the innermost Bob are contiguous.
struct Correlation {
  std::vector<int> settings;  // per-party setting counts, size = parties
  std::vector<int> outcomes;  // per-party outcome counts, size = parties
  std::vector<double> values;

  int parties() const { return static_cast<int>(settings.size()); }
  std::size_t setting_blocks() const;  // product of all setting counts
  std::size_t outcome_block() const;   // product of all outcome counts

  std::size_t flat_index(std::span<const int> setting_idx,
                         std::span<const int> outcome_idx) const;
  double at(std::span<const int> setting_idx,
            std::span<const int> outcome_idx) const;
};

/// Prepare-and-distribute weights p(b_1..b_k | x, y_1..y_k) over k Rogers,
/// with the preparation index x outermost. Per-preparation blocks follow the
/// same settings-major layout as Correlation. Rows need not sum to one: the
/// weights produced by bell_to_pd are joint (unnormalized) on purpose.
struct PDCorrelation {
  int preparations = 0;
  std::vector<int> settings;  // per-Roger, size = rogers
  std::vector<int> outcomes;
  std::vector<double> values;

  int rogers() const { return static_cast<int>(settings.size()); }
  std::size_t block_size() const;  // entries per preparation
  std::size_t flat_index(int prep, std::span<const int> setting_idx,
                         std::span<const int> outcome_idx) const;
};

struct ValidationReport {
  bool ok = false;
  double worst_normalization = 0.0;  // max |sum_outcomes p - 1| over settings
  long clamped_entries = 0;          // entries in [-clamp_tol, 0)
  long negative_entries = 0;         // entries below -clamp_tol
  std::optional<double> worst_no_signalling;
};

/// Builds a validated Correlation. Entries in [-clamp_tol, 0) are clamped to
/// zero; entries below -clamp_tol or rows off normalization by more than
/// norm_tol throw std::invalid_argument.
Correlation new_correlation(std::vector<int> settings, std::vector<int> outcomes,
                            std::vector<double> values,
                            double norm_tol = kDefaultNormTol,
                            double clamp_tol = kClampTol);

/// Reports normalization and negativity findings without mutating anything.
ValidationReport validate(const Correlation& c, double norm_tol = kDefaultNormTol);
ValidationReport validate(const PDCorrelation& pd, double norm_tol = kDefaultNormTol);

/// Checks that the marginal of every party subset is independent of the
/// complement's setting choices. Reports the worst deviation found.
ValidationReport check_no_signalling(const Correlation& c, double tol = kDefaultNsTol);

/// Swaps the roles of party `party` and Alice. Applying it twice with the
/// same index restores the original correlation.
Correlation promote_party(const Correlation& c, int party);

/// Permutes the Bob axes: new Bob-j is old Bob-perm[j-1]. `perm` holds the
/// Bob labels 1..k, each exactly once.
Correlation reorder_bobs(const Correlation& c, std::span<const int> perm);

/// Runs two experiments in parallel: per-party settings and outcomes become
/// lexicographically flattened pairs (first factor major) and probabilities
/// multiply.
Correlation tensor_product(const Correlation& c1, const Correlation& c2);

/// Fuses all Bobs into a single party with joint settings and outcomes. The
/// canonical layout makes this a pure reshape; values are shared unchanged.
Correlation group_bobs(const Correlation& c);

/// View of a Bell correlation as a prepare-and-distribute experiment: Alice's
/// (setting, outcome) pairs index the preparations and the stored weights are
/// the joints q_{x,a}(b|y) = p(a,b|x,y), not conditionals.
struct BellToPd {
  PDCorrelation weights;
  int alice_settings = 0;
  int alice_outcomes = 0;

  int prep_index(int x, int a) const { return x * alice_outcomes + a; }
};

BellToPd bell_to_pd(const Correlation& c);

/// Mixed-radix counter. Returns false once idx wraps back to all zeros.
bool next_index(std::span<const int> radix, std::span<int> idx);

}  // namespace belldim
