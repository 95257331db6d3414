#include "belldim/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace belldim {

namespace {

std::size_t product(std::span<const int> v) {
  std::size_t p = 1;
  for (int x : v) p *= static_cast<std::size_t>(x);
  return p;
}

// Precomputed strides of a WeightTensor in the settings-major layout.
struct Strides {
  std::vector<long> setting;
  std::vector<long> outcome;
};

Strides make_strides(const WeightTensor& t) {
  int k = t.rogers();
  Strides s;
  s.setting.resize(k);
  s.outcome.resize(k);
  long acc = 1;
  for (int r = k - 1; r >= 0; --r) {
    s.outcome[r] = acc;
    acc *= t.outcomes[r];
  }
  for (int r = k - 1; r >= 0; --r) {
    s.setting[r] = acc;
    acc *= t.settings[r];
  }
  return s;
}

// min_y sum_b over the remaining Rogers, leaf values looked up in `h`. Each
// (visited settings, visited outcomes) prefix is reached exactly once, so the
// cost is one pass over the prod_j |Y_j||B_j| strategy leaves.
double ams_rec(const std::vector<double>& h, const WeightTensor& shape,
               const Strides& st, std::span<const int> order, int depth, long base) {
  if (depth == static_cast<int>(order.size())) return h[base];
  int r = order[depth];
  double best = std::numeric_limits<double>::infinity();
  for (int y = 0; y < shape.settings[r]; ++y) {
    long with_y = base + y * st.setting[r];
    double sum = 0.0;
    for (int b = 0; b < shape.outcomes[r]; ++b)
      sum += ams_rec(h, shape, st, order, depth + 1, with_y + b * st.outcome[r]);
    best = std::min(best, sum);
  }
  return best;
}

std::vector<double> combined_weights(const WeightTensor& f, const WeightTensor& g) {
  if (f.settings != g.settings || f.outcomes != g.outcomes ||
      f.values.size() != g.values.size())
    throw std::invalid_argument("weight tensors must share a shape");
  std::vector<double> h(f.values.size());
  for (std::size_t i = 0; i < h.size(); ++i)
    h[i] = std::sqrt(f.values[i] * g.values[i]);
  return h;
}

double ams_combined(const std::vector<double>& h, const WeightTensor& shape,
                    std::span<const int> order) {
  Strides st = make_strides(shape);
  return ams_rec(h, shape, st, order, 0, 0);
}

std::vector<std::vector<int>> all_orders(int k) {
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

std::vector<int> slots_from_labels(std::span<const int> labels, int k) {
  std::vector<int> slots;
  if (labels.empty()) {
    slots.resize(k);
    std::iota(slots.begin(), slots.end(), 0);
    return slots;
  }
  if (static_cast<int>(labels.size()) != k)
    throw std::invalid_argument("ordering length must equal the Bob count");
  std::vector<bool> seen(k, false);
  for (int label : labels) {
    if (label < 1 || label > k || seen[label - 1])
      throw std::invalid_argument("ordering is not a permutation of 1..k");
    seen[label - 1] = true;
    slots.push_back(label - 1);
  }
  return slots;
}

std::vector<int> labels_from_slots(std::span<const int> slots) {
  std::vector<int> labels;
  for (int s : slots) labels.push_back(s + 1);
  return labels;
}

// One (x,x') pair of the dimension bound: the AMS term for every (a,a') plus
// the ordering bookkeeping for the report.
struct PairEvaluation {
  double purity = 0.0;
  std::vector<double> terms;
  std::vector<std::vector<int>> orderings;  // Bob labels
};

PairEvaluation evaluate_pair(const std::vector<WeightTensor>& slices_x,
                             const std::vector<WeightTensor>& slices_xp,
                             const AmsOptions& opts) {
  int a_count = static_cast<int>(slices_x.size());
  int ap_count = static_cast<int>(slices_xp.size());
  int k = slices_x[0].rogers();

  PairEvaluation pe;
  pe.terms.resize(static_cast<std::size_t>(a_count) * ap_count);

  if (opts.strategy == OrderingStrategy::kFixed) {
    std::vector<int> order = slots_from_labels(opts.fixed_order, k);
    for (int a = 0; a < a_count; ++a)
      for (int ap = 0; ap < ap_count; ++ap) {
        auto h = combined_weights(slices_x[a], slices_xp[ap]);
        pe.terms[a * ap_count + ap] = ams_combined(h, slices_x[a], order);
      }
    pe.orderings.push_back(labels_from_slots(order));
  } else if (opts.strategy == OrderingStrategy::kExhaustivePerTerm) {
    auto orders = all_orders(k);
    pe.orderings.resize(pe.terms.size());
    for (int a = 0; a < a_count; ++a)
      for (int ap = 0; ap < ap_count; ++ap) {
        auto h = combined_weights(slices_x[a], slices_xp[ap]);
        double best = std::numeric_limits<double>::infinity();
        const std::vector<int>* argmin = nullptr;
        for (const auto& order : orders) {
          double v = ams_combined(h, slices_x[a], order);
          if (v < best) {
            best = v;
            argmin = &order;
          }
        }
        pe.terms[a * ap_count + ap] = best;
        pe.orderings[a * ap_count + ap] = labels_from_slots(*argmin);
      }
  } else {  // kExhaustiveGlobal
    auto orders = all_orders(k);
    std::vector<std::vector<double>> combined(pe.terms.size());
    for (int a = 0; a < a_count; ++a)
      for (int ap = 0; ap < ap_count; ++ap)
        combined[a * ap_count + ap] = combined_weights(slices_x[a], slices_xp[ap]);

    double best_total = std::numeric_limits<double>::infinity();
    std::vector<double> best_terms;
    const std::vector<int>* argmin = nullptr;
    std::vector<double> terms(pe.terms.size());
    for (const auto& order : orders) {
      double total = 0.0;
      for (std::size_t t = 0; t < terms.size(); ++t) {
        double v = ams_combined(combined[t], slices_x[t / ap_count], order);
        terms[t] = v;
        total += v * v;
      }
      if (total < best_total) {
        best_total = total;
        best_terms = terms;
        argmin = &order;
      }
    }
    pe.terms = std::move(best_terms);
    pe.orderings.push_back(labels_from_slots(*argmin));
  }

  pe.purity = 0.0;
  for (double t : pe.terms) pe.purity += t * t;
  return pe;
}

bool denominator_is_zero(double d, double threshold) {
  return d == 0.0 || d < threshold;
}

}  // namespace

AmsOptions AmsOptions::auto_for(int bob_count) {
  AmsOptions opts;
  if (bob_count > 5) opts.strategy = OrderingStrategy::kFixed;
  return opts;
}

double rounded_bound(double exact) {
  if (std::isinf(exact)) return exact;
  return std::ceil(exact - 1e-9);
}

double BoundReport::rounded() const { return rounded_bound(bound); }

double ams(const WeightTensor& f, const WeightTensor& g, std::span<const int> order) {
  int k = f.rogers();
  if (static_cast<int>(order.size()) != k)
    throw std::invalid_argument("order length must equal the Roger count");
  std::vector<bool> seen(k, false);
  for (int r : order) {
    if (r < 0 || r >= k || seen[r])
      throw std::invalid_argument("order is not a permutation of the Roger slots");
    seen[r] = true;
  }
  auto h = combined_weights(f, g);
  return ams_combined(h, f, order);
}

WeightTensor weight_slice(const Correlation& c, int x, int a) {
  int n = c.parties();
  int k = n - 1;
  if (x < 0 || x >= c.settings[0]) throw std::invalid_argument("x out of range");
  if (a < 0 || a >= c.outcomes[0]) throw std::invalid_argument("a out of range");

  WeightTensor t;
  t.settings.assign(c.settings.begin() + 1, c.settings.end());
  t.outcomes.assign(c.outcomes.begin() + 1, c.outcomes.end());
  t.values.resize(product(t.settings) * product(t.outcomes));

  std::vector<int> s_idx(n, 0), o_idx(n, 0);
  s_idx[0] = x;
  o_idx[0] = a;
  std::size_t flat = 0;
  std::vector<int> y(k, 0);
  do {
    std::copy(y.begin(), y.end(), s_idx.begin() + 1);
    std::vector<int> b(k, 0);
    do {
      std::copy(b.begin(), b.end(), o_idx.begin() + 1);
      t.values[flat++] = c.at(s_idx, o_idx);
    } while (next_index(t.outcomes, b));
  } while (next_index(t.settings, y));
  return t;
}

WeightTensor pd_slice(const PDCorrelation& pd, int x) {
  if (x < 0 || x >= pd.preparations) throw std::invalid_argument("preparation out of range");
  WeightTensor t;
  t.settings = pd.settings;
  t.outcomes = pd.outcomes;
  std::size_t block = pd.block_size();
  t.values.assign(pd.values.begin() + x * block, pd.values.begin() + (x + 1) * block);
  return t;
}

double fidelity_bound_trivial(const PDCorrelation& pd, int x, int x_prime) {
  WeightTensor f = pd_slice(pd, x);
  WeightTensor g = pd_slice(pd, x_prime);
  std::size_t oblock = product(f.outcomes);
  std::size_t rows = product(f.settings);

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < rows; ++r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < oblock; ++i)
      sum += std::sqrt(f.values[r * oblock + i] * g.values[r * oblock + i]);
    best = std::min(best, sum);
  }
  return best;
}

double fidelity_bound_ams(const PDCorrelation& pd, int x, int x_prime,
                          const AmsOptions& opts) {
  WeightTensor f = pd_slice(pd, x);
  WeightTensor g = pd_slice(pd, x_prime);
  int k = f.rogers();
  auto h = combined_weights(f, g);

  if (opts.strategy == OrderingStrategy::kFixed)
    return ams_combined(h, f, slots_from_labels(opts.fixed_order, k));

  double best = std::numeric_limits<double>::infinity();
  for (const auto& order : all_orders(k))
    best = std::min(best, ams_combined(h, f, order));
  return best;
}

double purity_bound(const Correlation& c, int x, int x_prime, const AmsOptions& opts) {
  std::vector<WeightTensor> slices_x, slices_xp;
  for (int a = 0; a < c.outcomes[0]; ++a) {
    slices_x.push_back(weight_slice(c, x, a));
    slices_xp.push_back(weight_slice(c, x_prime, a));
  }
  return evaluate_pair(slices_x, slices_xp, opts).purity;
}

BoundReport dimension_bound(const Correlation& c, int target_party,
                            std::optional<AmsOptions> opts_in) {
  Correlation cc = promote_party(c, target_party);
  int k = cc.parties() - 1;
  AmsOptions opts = opts_in ? *opts_in : AmsOptions::auto_for(k);
  if (opts.strategy == OrderingStrategy::kFixed)
    opts.fixed_order = labels_from_slots(slots_from_labels(opts.fixed_order, k));

  // All weight slices once; pairs reuse them.
  std::vector<std::vector<WeightTensor>> slices(cc.settings[0]);
  for (int x = 0; x < cc.settings[0]; ++x)
    for (int a = 0; a < cc.outcomes[0]; ++a)
      slices[x].push_back(weight_slice(cc, x, a));

  BoundReport report;
  report.target_party = target_party;
  report.alice_outcomes = cc.outcomes[0];
  report.strategy = opts.strategy;

  double best = std::numeric_limits<double>::infinity();
  for (int x = 0; x < cc.settings[0]; ++x) {
    for (int xp = 0; xp < cc.settings[0]; ++xp) {
      PairEvaluation pe = evaluate_pair(slices[x], slices[xp], opts);
      if (pe.purity < best) {
        best = pe.purity;
        report.argmin_x = x;
        report.argmin_x_prime = xp;
        report.ams_terms = std::move(pe.terms);
        report.orderings = std::move(pe.orderings);
      }
    }
  }

  report.denominator = best;
  report.bound = denominator_is_zero(best, opts.inf_threshold)
                     ? std::numeric_limits<double>::infinity()
                     : 1.0 / best;
  return report;
}

BoundReport dimension_bound_grouped(const Correlation& c, int target_party,
                                    double inf_threshold) {
  Correlation grouped = group_bobs(promote_party(c, target_party));
  AmsOptions opts;
  opts.strategy = OrderingStrategy::kFixed;
  opts.inf_threshold = inf_threshold;
  BoundReport report = dimension_bound(grouped, 0, opts);
  report.target_party = target_party;
  report.grouped = true;
  return report;
}

}  // namespace belldim
