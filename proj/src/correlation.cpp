#include "belldim/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace belldim {

namespace {

std::size_t product(std::span<const int> v) {
  std::size_t p = 1;
  for (int x : v) p *= static_cast<std::size_t>(x);
  return p;
}

void check_cardinalities(std::span<const int> settings, std::span<const int> outcomes,
                         int min_parties) {
  if (settings.size() != outcomes.size())
    throw std::invalid_argument("settings/outcomes size mismatch");
  if (static_cast<int>(settings.size()) < min_parties)
    throw std::invalid_argument("need at least " + std::to_string(min_parties) + " parties");
  for (std::size_t i = 0; i < settings.size(); ++i) {
    if (settings[i] < 1 || outcomes[i] < 1)
      throw std::invalid_argument("setting and outcome counts must be >= 1");
  }
}

}  // namespace

std::size_t Correlation::setting_blocks() const { return product(settings); }
std::size_t Correlation::outcome_block() const { return product(outcomes); }

std::size_t Correlation::flat_index(std::span<const int> setting_idx,
                                    std::span<const int> outcome_idx) const {
  std::size_t idx = 0;
  for (int p = 0; p < parties(); ++p) idx = idx * settings[p] + setting_idx[p];
  for (int p = 0; p < parties(); ++p) idx = idx * outcomes[p] + outcome_idx[p];
  return idx;
}

double Correlation::at(std::span<const int> setting_idx,
                       std::span<const int> outcome_idx) const {
  return values[flat_index(setting_idx, outcome_idx)];
}

std::size_t PDCorrelation::block_size() const {
  return product(settings) * product(outcomes);
}

std::size_t PDCorrelation::flat_index(int prep, std::span<const int> setting_idx,
                                      std::span<const int> outcome_idx) const {
  std::size_t idx = static_cast<std::size_t>(prep);
  for (int r = 0; r < rogers(); ++r) idx = idx * settings[r] + setting_idx[r];
  for (int r = 0; r < rogers(); ++r) idx = idx * outcomes[r] + outcome_idx[r];
  return idx;
}

bool next_index(std::span<const int> radix, std::span<int> idx) {
  for (int i = static_cast<int>(radix.size()) - 1; i >= 0; --i) {
    if (++idx[i] < radix[i]) return true;
    idx[i] = 0;
  }
  return false;
}

Correlation new_correlation(std::vector<int> settings, std::vector<int> outcomes,
                            std::vector<double> values, double norm_tol,
                            double clamp_tol) {
  check_cardinalities(settings, outcomes, 2);
  Correlation c{std::move(settings), std::move(outcomes), std::move(values)};
  if (c.values.size() != c.setting_blocks() * c.outcome_block())
    throw std::invalid_argument("values length does not match declared shape");

  for (double& v : c.values) {
    if (v < 0.0) {
      if (v < -clamp_tol)
        throw std::invalid_argument("negative probability entry " + std::to_string(v));
      v = 0.0;
    }
  }

  std::size_t block = c.outcome_block();
  for (std::size_t s = 0; s < c.setting_blocks(); ++s) {
    double sum = std::accumulate(c.values.begin() + s * block,
                                 c.values.begin() + (s + 1) * block, 0.0);
    if (std::abs(sum - 1.0) > norm_tol)
      throw std::invalid_argument("setting row " + std::to_string(s) +
                                  " sums to " + std::to_string(sum));
  }
  return c;
}

ValidationReport validate(const Correlation& c, double norm_tol) {
  ValidationReport r;
  for (double v : c.values) {
    if (v < -kClampTol)
      ++r.negative_entries;
    else if (v < 0.0)
      ++r.clamped_entries;
  }
  std::size_t block = c.outcome_block();
  for (std::size_t s = 0; s < c.setting_blocks(); ++s) {
    double sum = std::accumulate(c.values.begin() + s * block,
                                 c.values.begin() + (s + 1) * block, 0.0);
    r.worst_normalization = std::max(r.worst_normalization, std::abs(sum - 1.0));
  }
  r.ok = r.negative_entries == 0 && r.worst_normalization <= norm_tol;
  return r;
}

ValidationReport validate(const PDCorrelation& pd, double norm_tol) {
  ValidationReport r;
  for (double v : pd.values) {
    if (v < -kClampTol)
      ++r.negative_entries;
    else if (v < 0.0)
      ++r.clamped_entries;
  }
  std::size_t oblock = 1;
  for (int o : pd.outcomes) oblock *= o;
  std::size_t rows = pd.values.size() / oblock;
  for (std::size_t s = 0; s < rows; ++s) {
    double sum = std::accumulate(pd.values.begin() + s * oblock,
                                 pd.values.begin() + (s + 1) * oblock, 0.0);
    r.worst_normalization = std::max(r.worst_normalization, std::abs(sum - 1.0));
  }
  r.ok = r.negative_entries == 0 && r.worst_normalization <= norm_tol;
  return r;
}

ValidationReport check_no_signalling(const Correlation& c, double tol) {
  int n = c.parties();
  double worst = 0.0;

  // For each nonempty proper subset S: the marginal over S's outcomes must
  // not depend on the complement's settings.
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<int> in_s, out_s;
    for (int p = 0; p < n; ++p) ((mask >> p) & 1u ? in_s : out_s).push_back(p);

    std::size_t s_settings = 1, s_outcomes = 1, c_settings = 1;
    for (int p : in_s) {
      s_settings *= c.settings[p];
      s_outcomes *= c.outcomes[p];
    }
    for (int p : out_s) c_settings *= c.settings[p];

    // marg[(s_S, o_S, s_complement)] = sum over complement outcomes
    std::vector<double> marg(s_settings * s_outcomes * c_settings, 0.0);
    std::vector<int> s_idx(n, 0);
    do {
      std::size_t si = 0, ci = 0;
      for (int p : in_s) si = si * c.settings[p] + s_idx[p];
      for (int p : out_s) ci = ci * c.settings[p] + s_idx[p];
      std::vector<int> o_idx(n, 0);
      do {
        std::size_t oi = 0;
        for (int p : in_s) oi = oi * c.outcomes[p] + o_idx[p];
        marg[(si * s_outcomes + oi) * c_settings + ci] += c.at(s_idx, o_idx);
      } while (next_index(c.outcomes, o_idx));
    } while (next_index(c.settings, s_idx));

    for (std::size_t row = 0; row < s_settings * s_outcomes; ++row) {
      auto begin = marg.begin() + row * c_settings;
      auto [lo, hi] = std::minmax_element(begin, begin + c_settings);
      worst = std::max(worst, *hi - *lo);
    }
  }

  ValidationReport r;
  r.worst_no_signalling = worst;
  r.ok = worst <= tol;
  return r;
}

Correlation promote_party(const Correlation& c, int party) {
  int n = c.parties();
  if (party < 0 || party >= n) throw std::invalid_argument("party index out of range");
  if (party == 0) return c;

  Correlation out;
  out.settings = c.settings;
  out.outcomes = c.outcomes;
  std::swap(out.settings[0], out.settings[party]);
  std::swap(out.outcomes[0], out.outcomes[party]);
  out.values.resize(c.values.size());

  std::vector<int> s_idx(n, 0);
  do {
    std::vector<int> o_idx(n, 0);
    do {
      std::vector<int> s_old(s_idx.begin(), s_idx.end());
      std::vector<int> o_old(o_idx.begin(), o_idx.end());
      std::swap(s_old[0], s_old[party]);
      std::swap(o_old[0], o_old[party]);
      out.values[out.flat_index(s_idx, o_idx)] = c.at(s_old, o_old);
    } while (next_index(out.outcomes, o_idx));
  } while (next_index(out.settings, s_idx));
  return out;
}

Correlation reorder_bobs(const Correlation& c, std::span<const int> perm) {
  int n = c.parties();
  int k = n - 1;
  if (static_cast<int>(perm.size()) != k)
    throw std::invalid_argument("permutation length must equal the Bob count");
  std::vector<bool> seen(k, false);
  for (int label : perm) {
    if (label < 1 || label > k || seen[label - 1])
      throw std::invalid_argument("not a permutation of 1..k");
    seen[label - 1] = true;
  }

  Correlation out;
  out.settings.resize(n);
  out.outcomes.resize(n);
  out.settings[0] = c.settings[0];
  out.outcomes[0] = c.outcomes[0];
  for (int j = 0; j < k; ++j) {
    out.settings[j + 1] = c.settings[perm[j]];
    out.outcomes[j + 1] = c.outcomes[perm[j]];
  }
  out.values.resize(c.values.size());

  std::vector<int> s_idx(n, 0);
  do {
    std::vector<int> o_idx(n, 0);
    do {
      std::vector<int> s_old(n), o_old(n);
      s_old[0] = s_idx[0];
      o_old[0] = o_idx[0];
      for (int j = 0; j < k; ++j) {
        s_old[perm[j]] = s_idx[j + 1];
        o_old[perm[j]] = o_idx[j + 1];
      }
      out.values[out.flat_index(s_idx, o_idx)] = c.at(s_old, o_old);
    } while (next_index(out.outcomes, o_idx));
  } while (next_index(out.settings, s_idx));
  return out;
}

Correlation tensor_product(const Correlation& c1, const Correlation& c2) {
  int n = c1.parties();
  if (n != c2.parties()) throw std::invalid_argument("party count mismatch");

  Correlation out;
  out.settings.resize(n);
  out.outcomes.resize(n);
  for (int p = 0; p < n; ++p) {
    out.settings[p] = c1.settings[p] * c2.settings[p];
    out.outcomes[p] = c1.outcomes[p] * c2.outcomes[p];
  }
  out.values.resize(out.setting_blocks() * out.outcome_block());

  std::vector<int> s_idx(n, 0);
  std::vector<int> s1(n), s2(n), o1(n), o2(n);
  do {
    for (int p = 0; p < n; ++p) {
      s1[p] = s_idx[p] / c2.settings[p];
      s2[p] = s_idx[p] % c2.settings[p];
    }
    std::vector<int> o_idx(n, 0);
    do {
      for (int p = 0; p < n; ++p) {
        o1[p] = o_idx[p] / c2.outcomes[p];
        o2[p] = o_idx[p] % c2.outcomes[p];
      }
      out.values[out.flat_index(s_idx, o_idx)] = c1.at(s1, o1) * c2.at(s2, o2);
    } while (next_index(out.outcomes, o_idx));
  } while (next_index(out.settings, s_idx));
  return out;
}

Correlation group_bobs(const Correlation& c) {
  int n = c.parties();
  if (n == 2) return c;
  std::size_t y = 1, b = 1;
  for (int p = 1; p < n; ++p) {
    y *= static_cast<std::size_t>(c.settings[p]);
    b *= static_cast<std::size_t>(c.outcomes[p]);
  }
  // The flat layout of (x, y..., a, b...) coincides with the grouped layout
  // of (x, Y, a, B), so the values vector carries over untouched.
  Correlation out;
  out.settings = {c.settings[0], static_cast<int>(y)};
  out.outcomes = {c.outcomes[0], static_cast<int>(b)};
  out.values = c.values;
  return out;
}

BellToPd bell_to_pd(const Correlation& c) {
  int n = c.parties();
  int k = n - 1;

  BellToPd out;
  out.alice_settings = c.settings[0];
  out.alice_outcomes = c.outcomes[0];
  out.weights.preparations = c.settings[0] * c.outcomes[0];
  out.weights.settings.assign(c.settings.begin() + 1, c.settings.end());
  out.weights.outcomes.assign(c.outcomes.begin() + 1, c.outcomes.end());
  out.weights.values.resize(static_cast<std::size_t>(out.weights.preparations) *
                            out.weights.block_size());

  std::vector<int> s_idx(n, 0);
  do {
    std::vector<int> o_idx(n, 0);
    do {
      int prep = out.prep_index(s_idx[0], o_idx[0]);
      std::span<const int> y(s_idx.data() + 1, k);
      std::span<const int> b(o_idx.data() + 1, k);
      out.weights.values[out.weights.flat_index(prep, y, b)] = c.at(s_idx, o_idx);
    } while (next_index(c.outcomes, o_idx));
  } while (next_index(c.settings, s_idx));
  return out;
}

}  // namespace belldim
