#include "belldim/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace belldim {

namespace {

long dim_product(std::span<const int> dims) {
  long p = 1;
  for (int d : dims) p *= d;
  return p;
}

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Weighted pure components of a state; a density matrix contributes its
// eigenbranches above kZeroProbTol.
struct Branches {
  std::vector<double> weights;
  std::vector<CVec> states;
};

Branches eigenbranches(const State& s) {
  Branches br;
  if (std::holds_alternative<PureState>(s)) {
    br.weights.push_back(1.0);
    br.states.push_back(std::get<PureState>(s).amps);
    return br;
  }
  const auto& dm = std::get<DensityMatrix>(s);
  Eigen::SelfAdjointEigenSolver<CMat> es(dm.rho);
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    double w = es.eigenvalues()(i);
    if (w > kZeroProbTol) {
      br.weights.push_back(w);
      br.states.push_back(es.eigenvectors().col(i));
    }
  }
  return br;
}

// Left-multiplies a density-like matrix by (I (x) ... (x) op (x) ... (x) I).
CMat apply_local_left(const CMat& op, int mode, const CMat& mat,
                      std::span<const int> dims) {
  CMat out(mat.rows(), mat.cols());
  for (long c = 0; c < mat.cols(); ++c)
    out.col(c) = apply_local(op, mode, mat.col(c), dims);
  return out;
}

CMat partial_trace_mat(const CMat& mat, std::span<const int> dims,
                       std::span<const int> keep) {
  int n = static_cast<int>(dims.size());
  std::vector<int> traced;
  std::vector<bool> kept(n, false);
  for (int p : keep) kept[p] = true;
  for (int p = 0; p < n; ++p)
    if (!kept[p]) traced.push_back(p);

  std::vector<long> stride(n);
  long acc = 1;
  for (int p = n - 1; p >= 0; --p) {
    stride[p] = acc;
    acc *= dims[p];
  }

  std::vector<int> keep_dims, traced_dims;
  for (int p : keep) keep_dims.push_back(dims[p]);
  for (int p : traced) traced_dims.push_back(dims[p]);
  long keep_total = dim_product(keep_dims);

  CMat out = CMat::Zero(keep_total, keep_total);
  std::vector<int> ki(keep.size(), 0);
  long row_out = 0;
  do {
    long row_base = 0;
    for (std::size_t i = 0; i < keep.size(); ++i) row_base += ki[i] * stride[keep[i]];
    std::vector<int> kj(keep.size(), 0);
    long col_out = 0;
    do {
      long col_base = 0;
      for (std::size_t i = 0; i < keep.size(); ++i) col_base += kj[i] * stride[keep[i]];
      Cx sum = 0.0;
      std::vector<int> ti(traced.size(), 0);
      do {
        long t_off = 0;
        for (std::size_t i = 0; i < traced.size(); ++i) t_off += ti[i] * stride[traced[i]];
        sum += mat(row_base + t_off, col_base + t_off);
      } while (!traced.empty() && next_index(traced_dims, ti));
      out(row_out, col_out) = sum;
      ++col_out;
    } while (next_index(keep_dims, kj));
    ++row_out;
  } while (next_index(keep_dims, ki));
  return out;
}

// Outcome probabilities for one setting tuple via the amplitude path.
// Requires every chosen measurement to be projective.
void projective_distribution(const Branches& branches,
                             const std::vector<const Measurement*>& chosen,
                             std::span<const int> dims, std::span<double> out) {
  int n = static_cast<int>(dims.size());
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t b = 0; b < branches.states.size(); ++b) {
    CVec psi = branches.states[b];
    for (int p = 0; p < n; ++p)
      psi = apply_local(chosen[p]->basis.conjugate(), p, psi, dims);
    for (long i = 0; i < psi.size(); ++i)
      out[i] += branches.weights[b] * std::norm(psi(i));
  }
}

// Trace-formula path: accumulates (E_0 (x) ... (x) E_{n-1}) rho mode by mode
// and takes the trace at the leaves. Works for any effect operators.
void trace_distribution(const CMat& rho, const std::vector<const Measurement*>& chosen,
                        std::span<const int> dims, std::span<double> out) {
  int n = static_cast<int>(dims.size());
  std::size_t flat = 0;
  auto rec = [&](auto&& self, int party, const CMat& acc) -> void {
    if (party == n) {
      out[flat++] = acc.trace().real();
      return;
    }
    for (int o = 0; o < chosen[party]->outcome_count(); ++o)
      self(self, party + 1, apply_local_left(chosen[party]->effect(o), party, acc, dims));
  };
  rec(rec, 0, rho);
}

std::vector<int> scenario_dims(const QuantumScenario& s) {
  const auto& dims = state_dims(s.state);
  require(static_cast<int>(dims.size()) == s.parties(),
          "measurement list size does not match party count");
  for (int p = 0; p < s.parties(); ++p) {
    require(s.measurements[p].dim == dims[p], "measurement dimension mismatch");
    require(!s.measurements[p].settings.empty(), "party has no measurement settings");
  }
  return dims;
}

bool all_projective(const std::vector<MeasurementSet>& sets) {
  for (const auto& ms : sets)
    for (const auto& m : ms.settings)
      if (!m.projective()) return false;
  return true;
}

std::vector<double> joint_values(const State& state,
                                 const std::vector<MeasurementSet>& sets,
                                 std::span<const int> dims,
                                 std::span<const int> setting_counts,
                                 std::size_t outcome_block, bool force_trace) {
  int n = static_cast<int>(sets.size());
  std::size_t rows = 1;
  for (int s : setting_counts) rows *= static_cast<std::size_t>(s);
  std::vector<double> values(rows * outcome_block);

  bool amplitude_path = !force_trace && all_projective(sets);
  Branches branches;
  CMat rho;
  if (amplitude_path)
    branches = eigenbranches(state);
  else
    rho = to_density(state).rho;

  std::vector<int> s_idx(n, 0);
  std::size_t offset = 0;
  do {
    std::vector<const Measurement*> chosen(n);
    for (int p = 0; p < n; ++p) chosen[p] = &sets[p].settings[s_idx[p]];
    std::span<double> out(values.data() + offset, outcome_block);
    if (amplitude_path)
      projective_distribution(branches, chosen, dims, out);
    else
      trace_distribution(rho, chosen, dims, out);
    offset += outcome_block;
  } while (next_index(setting_counts, s_idx));
  return values;
}

Correlation assemble_correlation(const QuantumScenario& s, bool force_trace) {
  auto dims = scenario_dims(s);
  int n = s.parties();
  std::vector<int> settings(n), outcomes(n);
  for (int p = 0; p < n; ++p) {
    settings[p] = static_cast<int>(s.measurements[p].settings.size());
    outcomes[p] = s.measurements[p].settings[0].outcome_count();
    for (const auto& m : s.measurements[p].settings)
      require(m.outcome_count() == outcomes[p],
              "settings of one party must share an outcome count");
  }
  std::size_t oblock = 1;
  for (int o : outcomes) oblock *= static_cast<std::size_t>(o);

  std::vector<double> values =
      joint_values(s.state, s.measurements, dims, settings, oblock, force_trace);
  return new_correlation(std::move(settings), std::move(outcomes), std::move(values));
}

}  // namespace

long PureState::total_dim() const { return dim_product(dims); }
long DensityMatrix::total_dim() const { return dim_product(dims); }

PureState make_pure(std::vector<int> dims, CVec amps) {
  require(!dims.empty(), "state needs at least one party");
  require(amps.size() == dim_product(dims), "amplitude length does not match dimensions");
  require(std::abs(amps.squaredNorm() - 1.0) <= kStateTol, "state vector is not normalized");
  return PureState{std::move(dims), std::move(amps)};
}

DensityMatrix make_density(std::vector<int> dims, CMat rho) {
  require(!dims.empty(), "state needs at least one party");
  long d = dim_product(dims);
  require(rho.rows() == d && rho.cols() == d, "matrix shape does not match dimensions");
  require((rho - rho.adjoint()).cwiseAbs().maxCoeff() <= kStateTol, "matrix is not Hermitian");
  require(std::abs(rho.trace() - Cx(1.0)) <= kStateTol, "matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -kPsdTol, "matrix has a negative eigenvalue");
  return DensityMatrix{std::move(dims), std::move(rho)};
}

DensityMatrix to_density(const State& s) {
  if (std::holds_alternative<DensityMatrix>(s)) return std::get<DensityMatrix>(s);
  const auto& ps = std::get<PureState>(s);
  return DensityMatrix{ps.dims, ps.amps * ps.amps.adjoint()};
}

const std::vector<int>& state_dims(const State& s) {
  return std::holds_alternative<PureState>(s) ? std::get<PureState>(s).dims
                                              : std::get<DensityMatrix>(s).dims;
}

CMat Measurement::effect(int outcome) const {
  if (!projective()) return effects[outcome];
  CVec v = basis.row(outcome).transpose();
  return v * v.adjoint();
}

Measurement projective_measurement(CMat basis_rows) {
  require(basis_rows.rows() == basis_rows.cols(), "projective basis must be complete");
  CMat gram = basis_rows * basis_rows.adjoint();
  require((gram - CMat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= kPsdTol,
          "basis vectors are not orthonormal");
  Measurement m;
  m.basis = std::move(basis_rows);
  return m;
}

Measurement povm_measurement(std::vector<CMat> effects) {
  require(!effects.empty(), "POVM needs at least one effect");
  long d = effects[0].rows();
  CMat sum = CMat::Zero(d, d);
  for (const auto& e : effects) {
    require(e.rows() == d && e.cols() == d, "effect shape mismatch");
    require((e - e.adjoint()).cwiseAbs().maxCoeff() <= kPsdTol, "effect is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> es(e, Eigen::EigenvaluesOnly);
    require(es.eigenvalues().minCoeff() >= -kPsdTol, "effect is not positive semidefinite");
    sum += e;
  }
  require((sum - CMat::Identity(d, d)).cwiseAbs().maxCoeff() <= kPsdTol,
          "effects do not sum to identity");
  Measurement m;
  m.effects = std::move(effects);
  return m;
}

CVec apply_local(const CMat& op, int mode, const CVec& psi, std::span<const int> dims) {
  int n = static_cast<int>(dims.size());
  long left = 1, right = 1;
  for (int p = 0; p < mode; ++p) left *= dims[p];
  for (int p = mode + 1; p < n; ++p) right *= dims[p];
  long d = dims[mode];
  long e = op.rows();

  CVec out(left * e * right);
  for (long l = 0; l < left; ++l) {
    for (long r = 0; r < right; ++r) {
      for (long i = 0; i < e; ++i) {
        Cx acc = 0.0;
        for (long j = 0; j < d; ++j) acc += op(i, j) * psi((l * d + j) * right + r);
        out((l * e + i) * right + r) = acc;
      }
    }
  }
  return out;
}

Correlation born_correlation(const QuantumScenario& s) {
  return assemble_correlation(s, false);
}

Correlation born_correlation_direct(const QuantumScenario& s) {
  return assemble_correlation(s, true);
}

PDCorrelation pd_correlation(const std::vector<DensityMatrix>& preparations,
                             const std::vector<MeasurementSet>& rogers) {
  require(!preparations.empty(), "need at least one preparation");
  int k = static_cast<int>(rogers.size());
  require(k >= 1, "need at least one Roger");
  for (const auto& prep : preparations) {
    require(static_cast<int>(prep.dims.size()) == k, "preparation party count mismatch");
    for (int r = 0; r < k; ++r)
      require(prep.dims[r] == rogers[r].dim, "preparation dimension mismatch");
  }

  PDCorrelation pd;
  pd.preparations = static_cast<int>(preparations.size());
  pd.settings.resize(k);
  pd.outcomes.resize(k);
  for (int r = 0; r < k; ++r) {
    pd.settings[r] = static_cast<int>(rogers[r].settings.size());
    pd.outcomes[r] = rogers[r].settings[0].outcome_count();
    for (const auto& m : rogers[r].settings)
      require(m.outcome_count() == pd.outcomes[r],
              "settings of one Roger must share an outcome count");
  }

  std::size_t oblock = 1;
  for (int o : pd.outcomes) oblock *= static_cast<std::size_t>(o);

  pd.values.reserve(static_cast<std::size_t>(pd.preparations) * pd.block_size());
  for (const auto& prep : preparations) {
    std::vector<double> block =
        joint_values(State{prep}, rogers, prep.dims, pd.settings, oblock, false);
    for (double v : block) pd.values.push_back(std::max(v, 0.0));
  }
  return pd;
}

CollapseResult collapse(const QuantumScenario& s, int party, int setting, int outcome) {
  auto dims = scenario_dims(s);
  int n = s.parties();
  require(n >= 2, "collapse needs at least two parties");
  require(party >= 0 && party < n, "party index out of range");
  const auto& ms = s.measurements[party];
  require(setting >= 0 && setting < static_cast<int>(ms.settings.size()),
          "setting index out of range");
  const Measurement& m = ms.settings[setting];
  require(outcome >= 0 && outcome < m.outcome_count(), "outcome index out of range");

  std::vector<int> rest_dims;
  for (int p = 0; p < n; ++p)
    if (p != party) rest_dims.push_back(dims[p]);

  if (std::holds_alternative<PureState>(s.state) && m.projective()) {
    const auto& ps = std::get<PureState>(s.state);
    CMat row = m.basis.row(outcome).conjugate();
    CVec rest = apply_local(row, party, ps.amps, dims);
    double p = rest.squaredNorm();
    if (p < kZeroProbTol) return CollapseResult{0.0, std::nullopt};
    rest /= std::sqrt(p);
    return CollapseResult{p, make_density(rest_dims, rest * rest.adjoint())};
  }

  CMat rho = to_density(s.state).rho;
  CMat applied = apply_local_left(m.effect(outcome), party, rho, dims);
  double p = applied.trace().real();
  if (p < kZeroProbTol) return CollapseResult{0.0, std::nullopt};
  std::vector<int> keep;
  for (int q = 0; q < n; ++q)
    if (q != party) keep.push_back(q);
  CMat rest = partial_trace_mat(applied, dims, keep) / p;
  rest = (rest + rest.adjoint()) / 2.0;
  return CollapseResult{p, make_density(rest_dims, std::move(rest))};
}

double fidelity(const DensityMatrix& s1, const DensityMatrix& s2) {
  require(s1.rho.rows() == s2.rho.rows(), "dimension mismatch");

  // Rank-one shortcut: for pure states the fidelity is the plain overlap.
  if (purity(s1) > 1.0 - kPsdTol && purity(s2) > 1.0 - kPsdTol) {
    Eigen::SelfAdjointEigenSolver<CMat> e1(s1.rho), e2(s2.rho);
    long i1 = 0, i2 = 0;
    e1.eigenvalues().maxCoeff(&i1);
    e2.eigenvalues().maxCoeff(&i2);
    Cx overlap = e1.eigenvectors().col(i1).adjoint() * e2.eigenvectors().col(i2);
    return std::min(1.0, std::abs(overlap));
  }

  Eigen::SelfAdjointEigenSolver<CMat> es(s1.rho);
  // Eigenvalues that are zero up to solver noise must not enter the square
  // root: sqrt(1e-16) would pollute the trace norm at the 1e-8 level.
  double cutoff = std::max(0.0, es.eigenvalues().maxCoeff()) * 1e-13;
  CVec sqrt_ev(es.eigenvalues().size());
  for (long i = 0; i < sqrt_ev.size(); ++i) {
    double ev = es.eigenvalues()(i);
    sqrt_ev(i) = ev > cutoff ? std::sqrt(ev) : 0.0;
  }
  CMat root = es.eigenvectors() * sqrt_ev.asDiagonal() * es.eigenvectors().adjoint();
  CMat inner = root * s2.rho * root;
  inner = (inner + inner.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMat> ei(inner, Eigen::EigenvaluesOnly);
  double inner_cutoff = std::max(0.0, ei.eigenvalues().maxCoeff()) * 1e-13;
  double f = 0.0;
  for (long i = 0; i < ei.eigenvalues().size(); ++i) {
    double ev = ei.eigenvalues()(i);
    if (ev > inner_cutoff) f += std::sqrt(ev);
  }
  return std::min(1.0, f);
}

double purity(const DensityMatrix& s) { return s.rho.squaredNorm(); }

DensityMatrix partial_trace(const DensityMatrix& s, std::span<const int> keep) {
  require(!keep.empty(), "keep set must be nonempty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    require(keep[i] >= 0 && keep[i] < s.parties(), "keep index out of range");
    require(i == 0 || keep[i] > keep[i - 1], "keep set must be strictly increasing");
  }
  std::vector<int> kept_dims;
  for (int p : keep) kept_dims.push_back(s.dims[p]);
  CMat out = partial_trace_mat(s.rho, s.dims, keep);
  out = (out + out.adjoint()) / 2.0;
  return DensityMatrix{std::move(kept_dims), std::move(out)};
}

MeasurementSet random_measurement_set(int dim, int num_settings, std::uint64_t seed,
                                      MatrixEnsemble ensemble) {
  require(dim >= 2, "dimension must be >= 2");
  require(num_settings >= 1, "need at least one setting");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto draw = [&] {
    return ensemble == MatrixEnsemble::kUniform01 ? uniform(rng) : normal(rng);
  };

  MeasurementSet ms;
  ms.dim = dim;
  for (int s = 0; s < num_settings; ++s) {
    CMat basis(dim, dim);
    if (ensemble != MatrixEnsemble::kGaussianComplex) {
      Eigen::MatrixXd a(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = draw();
      Eigen::MatrixXd sym = (a + a.transpose()) / 2.0;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
      Eigen::MatrixXd v = es.eigenvectors();  // columns, eigenvalues ascending
      for (int c = 0; c < dim; ++c) {
        long imax = 0;
        v.col(c).cwiseAbs().maxCoeff(&imax);
        if (v(imax, c) < 0.0) v.col(c) = -v.col(c);
        basis.row(c) = v.col(c).transpose().cast<Cx>();
      }
    } else {
      CMat a(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          double re = normal(rng);
          double im = normal(rng);
          a(i, j) = Cx(re, im);
        }
      CMat herm = (a + a.adjoint()) / 2.0;
      Eigen::SelfAdjointEigenSolver<CMat> es(herm);
      CMat v = es.eigenvectors();
      for (int c = 0; c < dim; ++c) {
        long imax = 0;
        v.col(c).cwiseAbs().maxCoeff(&imax);
        Cx pivot = v(imax, c);
        v.col(c) *= std::conj(pivot) / std::abs(pivot);
        basis.row(c) = v.col(c).transpose();
      }
    }
    ms.settings.push_back(projective_measurement(std::move(basis)));
  }
  return ms;
}

State builtin_state(const std::string& name, int d, int parties) {
  require(d >= 2, "dimension must be >= 2");
  require(parties >= 1, "party count must be >= 1");
  std::vector<int> dims(parties, d);
  long total = dim_product(dims);

  auto diagonal_position = [&](int i) {
    long idx = 0;
    for (int p = 0; p < parties; ++p) idx = idx * d + i;
    return idx;
  };

  if (name == "maxent" || name == "ghz-qubit") {
    if (name == "ghz-qubit") require(d == 2, "ghz-qubit is a qubit state");
    CVec amps = CVec::Zero(total);
    for (int i = 0; i < d; ++i) amps(diagonal_position(i)) = 1.0 / std::sqrt(double(d));
    return make_pure(std::move(dims), std::move(amps));
  }
  if (name == "weighted") {
    double norm2 = 0.0;
    for (int i = 1; i <= d; ++i) norm2 += double(i) * i;
    CVec amps = CVec::Zero(total);
    for (int i = 0; i < d; ++i) amps(diagonal_position(i)) = (i + 1) / std::sqrt(norm2);
    return make_pure(std::move(dims), std::move(amps));
  }
  if (name == "classical") {
    CMat rho = CMat::Zero(total, total);
    for (int i = 0; i < d; ++i) {
      long pos = diagonal_position(i);
      rho(pos, pos) = 1.0 / d;
    }
    return make_density(std::move(dims), std::move(rho));
  }
  if (name == "dicke3") {
    require(d == 3 && parties == 3, "dicke3 requires d=3 and 3 parties");
    CVec amps = CVec::Zero(total);
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms) amps((p[0] * 3 + p[1]) * 3 + p[2]) = 1.0 / std::sqrt(6.0);
    return make_pure(std::move(dims), std::move(amps));
  }
  throw std::invalid_argument("unknown builtin state '" + name + "'");
}

}  // namespace belldim
