#pragma once

#include <string>

#include "belldim/correlation.hpp"

namespace belldim {

/// Closed-form correlation families used as exact references. All entries are
/// dyadic or decimal rationals representable without rounding error.
struct GeneratorSpec {
  enum class Family { kGhz, kPrBox, kEq19, kMaxEntCb };
  Family family = Family::kGhz;
  int parties = 3;
  int d = 2;  // maxent-cb only
};

/// GHZ state measured in Pauli-X (setting 0) and Pauli-Y (setting 1) on every
/// party; outcome 0 is the +1 eigenvector. p = |1 + i^(2h(ab)+h(xy))|^2 / 2^(n+1)
/// with h the Hamming weight.
Correlation ghz_correlation(int parties);

/// Multiparty PR box: uniform weight 1/2^k on outcome tuples satisfying
/// a xor b_1 xor ... xor b_k = (y_1 * ... * y_k) * x.
Correlation prbox_correlation(int parties);

/// The three-party non-signalling correlation with weight 1/4 on tuples
/// satisfying x * (y2 xor b1) = a xor b1 xor b2.
Correlation eq19_correlation();

/// Computational-basis slice of the maximally entangled state: one setting
/// per party, p = 1/d when all outcomes agree.
Correlation maxent_cb_correlation(int d, int parties);

Correlation generate(const GeneratorSpec& spec);
GeneratorSpec parse_generator_spec(const std::string& family, int parties, int d);

}  // namespace belldim
