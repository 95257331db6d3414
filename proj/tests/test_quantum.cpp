#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "belldim/generators.hpp"
#include "belldim/quantum.hpp"
#include "belldim/rng.hpp"
#include "test_support.hpp"

using namespace belldim;
using namespace belldim::testing;

TEST_CASE("Bell state under Pauli-X on both parties") {
  QuantumScenario s;
  s.state = builtin_state("maxent", 2, 2);
  MeasurementSet ms;
  ms.dim = 2;
  ms.settings = {pauli_x_basis()};
  s.measurements = {ms, ms};
  auto c = born_correlation(s);
  std::vector<int> zero{0, 0};
  std::vector<int> pp{0, 0}, mm{1, 1}, pm{0, 1}, mp{1, 0};
  CHECK(c.at(zero, pp) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c.at(zero, mm) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c.at(zero, pm) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c.at(zero, mp) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("GHZ with X/Y settings matches the closed form entrywise") {
  for (int parties : {2, 3, 4}) {
    auto c = born_correlation(ghz_xy_scenario(parties));
    auto gen = ghz_correlation(parties);
    REQUIRE(c.values.size() == gen.values.size());
    for (std::size_t i = 0; i < c.values.size(); ++i)
      CHECK(std::abs(c.values[i] - gen.values[i]) < 1e-12);
  }
}

TEST_CASE("classical state with computational measurements is diagonal") {
  for (int d : {2, 3}) {
    QuantumScenario s;
    s.state = builtin_state("classical", d, 3);
    MeasurementSet ms;
    ms.dim = d;
    ms.settings = {computational_basis(d)};
    s.measurements = {ms, ms, ms};
    auto c = born_correlation(s);
    std::vector<int> zero{0, 0, 0};
    std::vector<int> o(3, 0);
    do {
      bool diag = o[0] == o[1] && o[1] == o[2];
      CHECK(c.at(zero, o) == doctest::Approx(diag ? 1.0 / d : 0.0).epsilon(1e-12));
    } while (next_index(c.outcomes, o));
  }
}

TEST_CASE("eigenbranch and trace paths agree") {
  SUBCASE("mixed state, projective settings") {
    QuantumScenario s;
    s.state = random_density_matrix({2, 2}, 21, 3);
    s.measurements = {random_measurement_set(2, 2, 101), random_measurement_set(2, 2, 102)};
    auto fast = born_correlation(s);
    auto direct = born_correlation_direct(s);
    for (std::size_t i = 0; i < fast.values.size(); ++i)
      CHECK(fast.values[i] == doctest::Approx(direct.values[i]).epsilon(1e-10));
  }
  SUBCASE("POVM setting forces the trace path") {
    // trine POVM on a qubit
    std::vector<CMat> effects;
    for (int k = 0; k < 3; ++k) {
      double th = 2.0 * M_PI * k / 3.0;
      CVec v(2);
      v << std::cos(th / 2.0), std::sin(th / 2.0);
      effects.push_back((2.0 / 3.0) * v * v.adjoint());
    }
    QuantumScenario s;
    s.state = random_pure_state({2, 2}, 22);
    MeasurementSet trine;
    trine.dim = 2;
    trine.settings = {povm_measurement(effects)};
    MeasurementSet proj;
    proj.dim = 2;
    proj.settings = {pauli_x_basis()};
    s.measurements = {trine, proj};
    auto c = born_correlation(s);
    CHECK(c.outcomes == std::vector<int>{3, 2});
    CHECK(validate(c).ok);
    auto direct = born_correlation_direct(s);
    for (std::size_t i = 0; i < c.values.size(); ++i)
      CHECK(c.values[i] == doctest::Approx(direct.values[i]).epsilon(1e-10));
  }
}

TEST_CASE("simulated correlations validate and are non-signalling at 1e-9") {
  for (std::uint64_t seed : {31ULL, 32ULL}) {
    auto s = random_scenario({2, 2, 3}, 2, seed);
    auto c = born_correlation(s);
    CHECK(validate(c, 1e-9).ok);
    CHECK(check_no_signalling(c, 1e-9).ok);
  }
  QuantumScenario mixed;
  mixed.state = builtin_state("classical", 2, 3);
  for (int p = 0; p < 3; ++p) mixed.measurements.push_back(random_measurement_set(2, 2, 33 + p));
  auto c = born_correlation(mixed);
  CHECK(validate(c, 1e-9).ok);
  CHECK(check_no_signalling(c, 1e-9).ok);
}

TEST_CASE("pd_correlation") {
  SUBCASE("single preparation reproduces the Born distribution") {
    auto prep = to_density(State{random_pure_state({2, 2}, 41)});
    std::vector<MeasurementSet> rogers = {random_measurement_set(2, 2, 42),
                                          random_measurement_set(2, 2, 43)};
    auto pd = pd_correlation({prep}, rogers);
    CHECK(pd.preparations == 1);
    CHECK(validate(pd, 1e-10).ok);
  }
  SUBCASE("orthogonal pure preparations have disjoint supports") {
    CVec e00 = CVec::Zero(4), e11 = CVec::Zero(4);
    e00(0) = 1.0;
    e11(3) = 1.0;
    auto p0 = to_density(State{make_pure({2, 2}, e00)});
    auto p1 = to_density(State{make_pure({2, 2}, e11)});
    MeasurementSet comp;
    comp.dim = 2;
    comp.settings = {computational_basis(2)};
    auto pd = pd_correlation({p0, p1}, {comp, comp});
    for (int b1 = 0; b1 < 2; ++b1)
      for (int b2 = 0; b2 < 2; ++b2) {
        std::vector<int> y{0, 0}, b{b1, b2};
        double q0 = pd.values[pd.flat_index(0, y, b)];
        double q1 = pd.values[pd.flat_index(1, y, b)];
        CHECK(q0 * q1 == doctest::Approx(0.0));
      }
  }
  SUBCASE("collapse preparations match bell_to_pd after conditioning") {
    auto scenario = ghz_xy_scenario(3);
    auto btp = bell_to_pd(born_correlation(scenario));
    std::vector<MeasurementSet> rogers = {scenario.measurements[1],
                                          scenario.measurements[2]};
    for (int x = 0; x < 2; ++x) {
      std::vector<DensityMatrix> preps;
      std::vector<double> probs;
      for (int a = 0; a < 2; ++a) {
        auto col = collapse(scenario, 0, x, a);
        REQUIRE(col.state.has_value());
        preps.push_back(*col.state);
        probs.push_back(col.probability);
      }
      auto pd = pd_correlation(preps, rogers);
      std::size_t block = pd.block_size();
      for (int a = 0; a < 2; ++a) {
        int prep = btp.prep_index(x, a);
        for (std::size_t i = 0; i < block; ++i) {
          double joint = btp.weights.values[prep * block + i];
          double conditional = pd.values[a * block + i];
          CHECK(joint == doctest::Approx(probs[a] * conditional).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("collapse") {
  SUBCASE("GHZ_d computational collapse leaves |i..i>") {
    for (int d : {2, 3}) {
      QuantumScenario s;
      s.state = builtin_state("maxent", d, 3);
      MeasurementSet comp;
      comp.dim = d;
      comp.settings = {computational_basis(d)};
      s.measurements = {comp, comp, comp};
      for (int i = 0; i < d; ++i) {
        auto col = collapse(s, 0, 0, i);
        CHECK(col.probability == doctest::Approx(1.0 / d).epsilon(1e-12));
        REQUIRE(col.state.has_value());
        CVec expect = CVec::Zero(d * d);
        expect(i * d + i) = 1.0;
        auto target = make_density({d, d}, expect * expect.adjoint());
        CHECK(fidelity(*col.state, target) == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
  SUBCASE("product states collapse independently of the outcome") {
    CVec plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    std::mt19937_64 rng(51);
    CVec rest = random_unit_vector(rng, 4);
    CVec full(8);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 4; ++j) full(i * 4 + j) = plus(i) * rest(j);
    QuantumScenario s;
    s.state = make_pure({2, 2, 2}, full);
    MeasurementSet comp;
    comp.dim = 2;
    comp.settings = {computational_basis(2)};
    s.measurements = {comp, comp, comp};
    auto c0 = collapse(s, 0, 0, 0);
    auto c1 = collapse(s, 0, 0, 1);
    REQUIRE(c0.state.has_value());
    REQUIRE(c1.state.has_value());
    CHECK((c0.state->rho - c1.state->rho).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("vanishing amplitude yields probability zero and no state") {
    CVec e0 = CVec::Zero(4);
    e0(0) = 1.0;
    QuantumScenario s;
    s.state = make_pure({2, 2}, e0);
    MeasurementSet comp;
    comp.dim = 2;
    comp.settings = {computational_basis(2)};
    s.measurements = {comp, comp};
    auto col = collapse(s, 0, 0, 1);
    CHECK(col.probability == 0.0);
    CHECK_FALSE(col.state.has_value());
  }
  SUBCASE("outcome probabilities sum to one per setting") {
    auto s = random_scenario({3, 2, 2}, 2, 52);
    for (int x = 0; x < 2; ++x) {
      double total = 0.0;
      for (int a = 0; a < 3; ++a) total += collapse(s, 0, x, a).probability;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("fidelity") {
  auto rho = random_density_matrix({2, 2}, 61, 2);
  CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));

  CVec e0 = CVec::Zero(2), e1 = CVec::Zero(2), plus(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  auto d0 = make_density({2}, e0 * e0.adjoint());
  auto d1 = make_density({2}, e1 * e1.adjoint());
  auto dp = make_density({2}, plus * plus.adjoint());
  CHECK(fidelity(d0, d1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fidelity(d0, dp) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  SUBCASE("symmetry") {
    auto a = random_density_matrix({2, 2}, 62, 3);
    auto b = random_density_matrix({2, 2}, 63, 2);
    CHECK(std::abs(fidelity(a, b) - fidelity(b, a)) <= 1e-9);
  }
}

TEST_CASE("fidelity is monotone under measurement") {
  std::mt19937_64 rng(64);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    int d = 2 + trial % 3;
    auto a = random_density_matrix({d}, derive_seed(64, {std::uint64_t(trial), 0}), 1 + trial % d);
    auto b = random_density_matrix({d}, derive_seed(64, {std::uint64_t(trial), 1}), 1 + (trial + 1) % d);
    auto ms = random_measurement_set(d, 1, derive_seed(64, {std::uint64_t(trial), 2}),
                                     MatrixEnsemble::kGaussianComplex);
    const CMat& basis = ms.settings[0].basis;
    double classical = 0.0;
    for (int o = 0; o < d; ++o) {
      CVec v = basis.row(o).transpose();
      double pa = std::max(0.0, (v.adjoint() * a.rho * v)(0).real());
      double pb = std::max(0.0, (v.adjoint() * b.rho * v)(0).real());
      classical += std::sqrt(pa * pb);
    }
    CHECK(classical >= fidelity(a, b) - 1e-9);
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("purity") {
  auto pure = to_density(State{random_pure_state({2, 2}, 71)});
  CHECK(purity(pure) == doctest::Approx(1.0).epsilon(1e-12));

  for (int d : {2, 3, 4}) {
    auto mixed = make_density({d}, CMat::Identity(d, d) / double(d));
    CHECK(purity(mixed) == doctest::Approx(1.0 / d).epsilon(1e-12));
    auto ghz = to_density(builtin_state("maxent", d, 3));
    std::vector<int> alice{0};
    CHECK(purity(partial_trace(ghz, alice)) == doctest::Approx(1.0 / d).epsilon(1e-10));
  }
}

TEST_CASE("partial_trace") {
  SUBCASE("keeping every party is the identity") {
    auto rho = random_density_matrix({2, 3}, 72, 2);
    std::vector<int> all{0, 1};
    CHECK((partial_trace(rho, all).rho - rho.rho).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("product states reduce to their factors") {
    std::mt19937_64 rng(73);
    CVec a = random_unit_vector(rng, 2), b = random_unit_vector(rng, 3);
    CVec ab(6);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) ab(i * 3 + j) = a(i) * b(j);
    auto rho = make_pure({2, 3}, ab);
    auto reduced = partial_trace(to_density(State{rho}), std::vector<int>{1});
    CMat expect = b * b.adjoint();
    CHECK((reduced.rho - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("the reduced Bobs state is the probability mixture of collapses") {
    auto s = random_scenario({2, 2, 3}, 2, 74);
    auto rho = to_density(s.state);
    auto bobs = partial_trace(rho, std::vector<int>{1, 2});
    for (int x = 0; x < 2; ++x) {
      CMat mixture = CMat::Zero(6, 6);
      for (int a = 0; a < 2; ++a) {
        auto col = collapse(s, 0, x, a);
        if (col.state) mixture += col.probability * col.state->rho;
      }
      CHECK((bobs.rho - mixture).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("complementary purities agree for pure states") {
    for (std::uint64_t seed : {75ULL, 76ULL, 77ULL}) {
      auto rho = to_density(State{random_pure_state({2, 3, 2}, seed)});
      std::vector<int> alice{0}, bobs{1, 2};
      CHECK(purity(partial_trace(rho, alice)) ==
            doctest::Approx(purity(partial_trace(rho, bobs))).epsilon(1e-10));
    }
  }
  SUBCASE("empty keep set is rejected") {
    auto rho = random_density_matrix({2, 2}, 78, 2);
    CHECK_THROWS_AS(partial_trace(rho, std::vector<int>{}), std::invalid_argument);
  }
}

TEST_CASE("random_measurement_set") {
  SUBCASE("projectors are complete") {
    for (auto ens : {MatrixEnsemble::kUniform01, MatrixEnsemble::kGaussian,
                     MatrixEnsemble::kGaussianComplex}) {
      auto ms = random_measurement_set(3, 3, 81, ens);
      REQUIRE(ms.settings.size() == 3);
      for (const auto& m : ms.settings) {
        CMat sum = CMat::Zero(3, 3);
        for (int o = 0; o < 3; ++o) sum += m.effect(o);
        CHECK((sum - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
  SUBCASE("same seed, same bases") {
    auto a = random_measurement_set(4, 2, 82);
    auto b = random_measurement_set(4, 2, 82);
    for (int s = 0; s < 2; ++s)
      CHECK((a.settings[s].basis - b.settings[s].basis).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("real sampling yields real orthonormal vectors") {
    auto ms = random_measurement_set(3, 3, 83);
    for (const auto& m : ms.settings) {
      CHECK(m.basis.imag().cwiseAbs().maxCoeff() == 0.0);
      CHECK((m.basis * m.basis.adjoint() - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() <
            1e-10);
    }
  }
  SUBCASE("sign convention pins the largest component positive") {
    auto ms = random_measurement_set(3, 5, 84);
    for (const auto& m : ms.settings)
      for (int o = 0; o < 3; ++o) {
        Eigen::VectorXd v = m.basis.row(o).real();
        long imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        CHECK(v(imax) > 0.0);
      }
  }
}

TEST_CASE("builtin_state") {
  SUBCASE("maxent d=2 over three parties") {
    auto s = std::get<PureState>(builtin_state("maxent", 2, 3));
    CHECK(std::abs(s.amps(0) - Cx(1.0 / std::sqrt(2.0))) < 1e-15);
    CHECK(std::abs(s.amps(7) - Cx(1.0 / std::sqrt(2.0))) < 1e-15);
    CHECK(s.amps.squaredNorm() == doctest::Approx(1.0));
  }
  SUBCASE("weighted d=2 normalizes (1,2)") {
    auto s = std::get<PureState>(builtin_state("weighted", 2, 3));
    CHECK(std::abs(s.amps(0) - Cx(1.0 / std::sqrt(5.0))) < 1e-15);
    CHECK(std::abs(s.amps(7) - Cx(2.0 / std::sqrt(5.0))) < 1e-15);
  }
  SUBCASE("classical d=3 is rank 3 with purity 1/3") {
    auto s = std::get<DensityMatrix>(builtin_state("classical", 3, 3));
    CHECK(purity(s) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    Eigen::SelfAdjointEigenSolver<CMat> es(s.rho, Eigen::EigenvaluesOnly);
    int rank = 0;
    for (long i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) > 1e-12) ++rank;
    CHECK(rank == 3);
  }
  SUBCASE("dicke3 is the six-term permutation state") {
    auto s = std::get<PureState>(builtin_state("dicke3", 3, 3));
    int nonzero = 0;
    for (long i = 0; i < s.amps.size(); ++i)
      if (std::abs(s.amps(i)) > 1e-15) {
        ++nonzero;
        CHECK(std::abs(s.amps(i) - Cx(1.0 / std::sqrt(6.0))) < 1e-15);
      }
    CHECK(nonzero == 6);
    CHECK_THROWS_AS(builtin_state("dicke3", 2, 3), std::invalid_argument);
  }
  SUBCASE("unknown names are rejected") {
    CHECK_THROWS_AS(builtin_state("w-state", 2, 3), std::invalid_argument);
  }
}
