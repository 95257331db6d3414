#include "belldim/generators.hpp"

#include <stdexcept>

namespace belldim {

namespace {

int hamming(std::span<const int> bits) {
  int h = 0;
  for (int b : bits) h += b;
  return h;
}

// |1 + i^m|^2 for integer m; exactly one of {4, 2, 0, 2}.
double one_plus_i_pow_sq(int m) {
  switch (m % 4) {
    case 0: return 4.0;
    case 2: return 0.0;
    default: return 2.0;
  }
}

}  // namespace

Correlation ghz_correlation(int parties) {
  if (parties < 2) throw std::invalid_argument("ghz requires at least 2 parties");
  Correlation c;
  c.settings.assign(parties, 2);
  c.outcomes.assign(parties, 2);
  c.values.resize(c.setting_blocks() * c.outcome_block());

  double denom = static_cast<double>(1ULL << (parties + 1));
  std::vector<int> s(parties, 0);
  do {
    std::vector<int> o(parties, 0);
    do {
      int m = 2 * hamming(o) + hamming(s);
      c.values[c.flat_index(s, o)] = one_plus_i_pow_sq(m) / denom;
    } while (next_index(c.outcomes, o));
  } while (next_index(c.settings, s));
  return c;
}

Correlation prbox_correlation(int parties) {
  if (parties < 2) throw std::invalid_argument("prbox requires at least 2 parties");
  int k = parties - 1;
  Correlation c;
  c.settings.assign(parties, 2);
  c.outcomes.assign(parties, 2);
  c.values.resize(c.setting_blocks() * c.outcome_block());

  double weight = 1.0 / static_cast<double>(1ULL << k);
  std::vector<int> s(parties, 0);
  do {
    int y_prod = 1;
    for (int j = 1; j < parties; ++j) y_prod &= s[j];
    int rhs = y_prod & s[0];
    std::vector<int> o(parties, 0);
    do {
      int lhs = 0;
      for (int b : o) lhs ^= b;
      c.values[c.flat_index(s, o)] = (lhs == rhs) ? weight : 0.0;
    } while (next_index(c.outcomes, o));
  } while (next_index(c.settings, s));
  return c;
}

Correlation eq19_correlation() {
  Correlation c;
  c.settings.assign(3, 2);
  c.outcomes.assign(3, 2);
  c.values.resize(c.setting_blocks() * c.outcome_block());

  for (int x = 0; x < 2; ++x)
    for (int y1 = 0; y1 < 2; ++y1)
      for (int y2 = 0; y2 < 2; ++y2)
        for (int a = 0; a < 2; ++a)
          for (int b1 = 0; b1 < 2; ++b1)
            for (int b2 = 0; b2 < 2; ++b2) {
              std::vector<int> s{x, y1, y2}, o{a, b1, b2};
              bool hit = (x & (y2 ^ b1)) == (a ^ b1 ^ b2);
              c.values[c.flat_index(s, o)] = hit ? 0.25 : 0.0;
            }
  return c;
}

Correlation maxent_cb_correlation(int d, int parties) {
  if (d < 2) throw std::invalid_argument("maxent-cb requires dimension >= 2");
  if (parties < 2) throw std::invalid_argument("maxent-cb requires at least 2 parties");
  Correlation c;
  c.settings.assign(parties, 1);
  c.outcomes.assign(parties, d);
  c.values.assign(c.outcome_block(), 0.0);

  std::vector<int> s(parties, 0), o(parties, 0);
  for (int i = 0; i < d; ++i) {
    o.assign(parties, i);
    c.values[c.flat_index(s, o)] = 1.0 / d;
  }
  return c;
}

Correlation generate(const GeneratorSpec& spec) {
  switch (spec.family) {
    case GeneratorSpec::Family::kGhz: return ghz_correlation(spec.parties);
    case GeneratorSpec::Family::kPrBox: return prbox_correlation(spec.parties);
    case GeneratorSpec::Family::kEq19: return eq19_correlation();
    case GeneratorSpec::Family::kMaxEntCb: return maxent_cb_correlation(spec.d, spec.parties);
  }
  throw std::invalid_argument("unknown generator family");
}

GeneratorSpec parse_generator_spec(const std::string& family, int parties, int d) {
  GeneratorSpec spec;
  spec.parties = parties;
  spec.d = d;
  if (family == "ghz") {
    spec.family = GeneratorSpec::Family::kGhz;
  } else if (family == "prbox") {
    spec.family = GeneratorSpec::Family::kPrBox;
  } else if (family == "eq19") {
    spec.family = GeneratorSpec::Family::kEq19;
    if (parties != 3) throw std::invalid_argument("eq19 is a three-party correlation");
  } else if (family == "maxent-cb") {
    spec.family = GeneratorSpec::Family::kMaxEntCb;
  } else {
    throw std::invalid_argument("unknown generator family '" + family + "'");
  }
  return spec;
}

}  // namespace belldim
