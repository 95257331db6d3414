#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "belldim/correlation.hpp"

namespace belldim {

using Cx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kStateTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kZeroProbTol = 1e-12;

/// Pure state of a multiparty system. Amplitude index is party-0-major:
/// amps(((i_1*d_2 + i_2)*d_3 + ...)) with i_p the local basis index.
struct PureState {
  std::vector<int> dims;
  CVec amps;

  int parties() const { return static_cast<int>(dims.size()); }
  long total_dim() const;
};

struct DensityMatrix {
  std::vector<int> dims;
  CMat rho;

  int parties() const { return static_cast<int>(dims.size()); }
  long total_dim() const;
};

using State = std::variant<PureState, DensityMatrix>;

PureState make_pure(std::vector<int> dims, CVec amps);
DensityMatrix make_density(std::vector<int> dims, CMat rho);
DensityMatrix to_density(const State& s);
const std::vector<int>& state_dims(const State& s);

/// One measurement setting: either projective (rows of `basis` are the
/// outcome vectors, orthonormal) or a POVM listed by its effect operators.
struct Measurement {
  CMat basis;
  std::vector<CMat> effects;

  bool projective() const { return effects.empty(); }
  int outcome_count() const {
    return projective() ? static_cast<int>(basis.rows())
                        : static_cast<int>(effects.size());
  }
  CMat effect(int outcome) const;
};

Measurement projective_measurement(CMat basis_rows);
Measurement povm_measurement(std::vector<CMat> effects);

/// All measurement settings available to one party.
struct MeasurementSet {
  int dim = 0;
  std::vector<Measurement> settings;
};

struct QuantumScenario {
  State state;
  std::vector<MeasurementSet> measurements;  // one per party

  int parties() const { return static_cast<int>(measurements.size()); }
};

/// p(a,b|x,y) = Tr((M^x_a (x) N^y1_b1 (x) ...) rho). Uses the amplitude path
/// for pure states with projective settings; mixed states run through their
/// eigenbranches. The result passes validate and check_no_signalling.
Correlation born_correlation(const QuantumScenario& s);

/// Trace-formula reference path: builds the full density matrix and applies
/// effects mode by mode. Slower, kept as an independent cross-check.
Correlation born_correlation_direct(const QuantumScenario& s);

/// p(b|x,y) = Tr((N^y1_b1 (x) ...) rho_x) for preparations indexed by x.
PDCorrelation pd_correlation(const std::vector<DensityMatrix>& preparations,
                             const std::vector<MeasurementSet>& rogers);

/// Outcome probability and normalized post-measurement state of the
/// remaining parties. `state` is absent when the probability vanishes.
struct CollapseResult {
  double probability = 0.0;
  std::optional<DensityMatrix> state;
};

CollapseResult collapse(const QuantumScenario& s, int party, int setting, int outcome);

/// F(s1, s2) = trace norm of sqrt(s1) sqrt(s2). Falls back to the overlap
/// |<psi|phi>| when both states are rank one.
double fidelity(const DensityMatrix& s1, const DensityMatrix& s2);

/// Tr(rho^2).
double purity(const DensityMatrix& s);

DensityMatrix partial_trace(const DensityMatrix& s, std::span<const int> keep);

/// Entry distribution of the randomly sampled symmetric matrix whose
/// eigenbasis becomes one measurement setting.
///   kUniform01        iid uniform [0,1) entries (default); the reference
///                     ensemble statistics assume this sampler
///   kGaussian         iid standard normal entries (GOE); Haar eigenbasis
///   kGaussianComplex  complex Hermitian sampling (GUE), for exploration
enum class MatrixEnsemble { kUniform01, kGaussian, kGaussianComplex };

/// Each setting is the eigenbasis of an independently sampled symmetric
/// matrix, eigenvalues ascending, signs fixed by making the largest-magnitude
/// component positive (a phase convention in the complex case). Deterministic
/// given the seed.
MeasurementSet random_measurement_set(int dim, int num_settings, std::uint64_t seed,
                                      MatrixEnsemble ensemble = MatrixEnsemble::kUniform01);

/// Named reference states: maxent, weighted, classical, dicke3, ghz-qubit.
State builtin_state(const std::string& name, int d, int parties);

/// Applies a local operator to one tensor mode of a state vector.
CVec apply_local(const CMat& op, int mode, const CVec& psi, std::span<const int> dims);

}  // namespace belldim
