#pragma once

#include <random>
#include <vector>

#include "belldim/quantum.hpp"

namespace belldim::testing {

inline CVec random_unit_vector(std::mt19937_64& rng, long n) {
  std::normal_distribution<double> normal;
  CVec v(n);
  for (long i = 0; i < n; ++i) v(i) = Cx(normal(rng), normal(rng));
  return v / v.norm();
}

inline PureState random_pure_state(const std::vector<int>& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  long n = 1;
  for (int d : dims) n *= d;
  return make_pure(dims, random_unit_vector(rng, n));
}

inline DensityMatrix random_density_matrix(const std::vector<int>& dims, std::uint64_t seed,
                                           int rank) {
  std::mt19937_64 rng(seed);
  long n = 1;
  for (int d : dims) n *= d;
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  std::vector<double> w(rank);
  double total = 0.0;
  for (double& x : w) total += (x = uni(rng));
  CMat rho = CMat::Zero(n, n);
  for (int r = 0; r < rank; ++r) {
    CVec v = random_unit_vector(rng, n);
    rho += (w[r] / total) * v * v.adjoint();
  }
  rho = (rho + rho.adjoint()) / 2.0;
  return make_density(dims, std::move(rho));
}

inline Measurement pauli_x_basis() {
  double r = 1.0 / std::sqrt(2.0);
  CMat b(2, 2);
  b << r, r, r, -r;
  return projective_measurement(b);
}

inline Measurement pauli_y_basis() {
  double r = 1.0 / std::sqrt(2.0);
  CMat b(2, 2);
  b << r, Cx(0, r), r, Cx(0, -r);
  return projective_measurement(b);
}

inline Measurement computational_basis(int d) {
  return projective_measurement(CMat::Identity(d, d));
}

inline MeasurementSet xy_set() {
  MeasurementSet ms;
  ms.dim = 2;
  ms.settings = {pauli_x_basis(), pauli_y_basis()};
  return ms;
}

inline QuantumScenario ghz_xy_scenario(int parties) {
  QuantumScenario s;
  s.state = builtin_state("ghz-qubit", 2, parties);
  for (int p = 0; p < parties; ++p) s.measurements.push_back(xy_set());
  return s;
}

inline QuantumScenario random_scenario(const std::vector<int>& dims, int num_settings,
                                       std::uint64_t seed) {
  QuantumScenario s;
  s.state = random_pure_state(dims, seed);
  for (std::size_t p = 0; p < dims.size(); ++p)
    s.measurements.push_back(
        random_measurement_set(dims[p], num_settings, seed * 1315423911ULL + p + 1));
  return s;
}

}  // namespace belldim::testing
