#include <doctest.h>

#include <qucc/factor_ops.hpp>
#include <qucc/slater_condon.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using qucc::Determinant;
using qucc::Excitation;
using qucc::StateVector;
using qucc::UccFactor;

namespace {

// Random excitation over n_so spin orbitals: rank 1 or 2, disjoint sorted lists.
Excitation random_excitation(int n_so, std::mt19937& rng) {
  std::uniform_int_distribution<int> rank_dist(1, 2);
  const int rank = rank_dist(rng);
  std::vector<int> all(n_so);
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  Excitation ex;
  ex.occ.assign(all.begin(), all.begin() + rank);
  ex.vir.assign(all.begin() + rank, all.begin() + 2 * rank);
  std::sort(ex.occ.begin(), ex.occ.end());
  std::sort(ex.vir.begin(), ex.vir.end());
  return ex;
}

StateVector random_state(int n_spatial, int support, std::mt19937& rng) {
  std::uniform_int_distribution<std::uint64_t> bits(0, (1ull << n_spatial) - 1);
  std::normal_distribution<double> amp(0.0, 1.0);
  StateVector psi;
  for (int i = 0; i < support; ++i)
    psi.add(Determinant{bits(rng), bits(rng)}, amp(rng));
  psi.compact(1e-15);
  psi.scale(1.0 / psi.norm());
  return psi;
}

}  // namespace

TEST_CASE("zero angle is the identity") {
  std::mt19937 rng(3);
  const auto psi = random_state(4, 10, rng);
  const UccFactor f{Excitation{{0, 1}, {4, 6}}, 0.0};
  const auto out = qucc::apply_factor(f, psi);
  REQUIRE(out.size() == psi.size());
  for (const auto& [d, a] : psi) CHECK(out.amplitude(d) == a);
}

TEST_CASE("double factor rotates HF against its excited partner") {
  const auto& st = fixtures::h2().store;
  const Determinant hf = qucc::reference_determinant(st);
  const Excitation ex{{0, 1}, {2, 3}};
  const double theta = 0.37;
  const auto out = qucc::apply_factor(UccFactor{ex, theta}, StateVector(hf));
  const auto partner = qucc::apply_spin_orbital_ops(hf, ex.vir, ex.occ);
  REQUIRE(partner.has_value());
  REQUIRE(out.size() == 2);
  CHECK(out.amplitude(hf) == doctest::Approx(std::cos(theta)).epsilon(1e-14));
  CHECK(out.amplitude(partner->det) ==
        doctest::Approx(partner->sign * std::sin(theta)).epsilon(1e-14));
}

TEST_CASE("apply_factor matches the dense matrix exponential") {
  const int n_spatial = 4;
  const oracles::LadderSet ops(2 * n_spatial);
  std::mt19937 rng(2718);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 25; ++trial) {
    const Excitation ex = random_excitation(2 * n_spatial, rng);
    const double theta = angle(rng);
    const auto psi = random_state(n_spatial, 12, rng);

    const Eigen::MatrixXd U = oracles::expm(theta * oracles::generator_matrix(ops, ex));
    const Eigen::VectorXd expected = U * oracles::to_dense(psi, n_spatial);
    const Eigen::VectorXd got =
        oracles::to_dense(qucc::apply_factor(UccFactor{ex, theta}, psi), n_spatial);
    CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("factor derivatives") {
  const auto& st = fixtures::h2().store;
  const Determinant hf = qucc::reference_determinant(st);
  const Excitation ex{{0, 1}, {2, 3}};

  SUBCASE("order 1 at theta = 0 is the bare generator") {
    const auto out = qucc::apply_factor_derivative(UccFactor{ex, 0.0}, StateVector(hf), 1);
    const auto partner = qucc::apply_spin_orbital_ops(hf, ex.vir, ex.occ);
    REQUIRE(out.size() == 1);
    CHECK(out.amplitude(partner->det) == doctest::Approx(partner->sign).epsilon(1e-15));
  }
  SUBCASE("order 2 at theta = 0 projects the reference to minus itself") {
    const auto out = qucc::apply_factor_derivative(UccFactor{ex, 0.0}, StateVector(hf), 2);
    REQUIRE(out.size() == 1);
    CHECK(out.amplitude(hf) == doctest::Approx(-1.0).epsilon(1e-15));
  }
  SUBCASE("orders outside {1,2} are rejected") {
    CHECK_THROWS_AS(qucc::apply_factor_derivative(UccFactor{ex, 0.1}, StateVector(hf), 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(qucc::apply_factor_derivative(UccFactor{ex, 0.1}, StateVector(hf), 0),
                    std::invalid_argument);
  }
  SUBCASE("order 1 matches central finite differences of apply_factor") {
    std::mt19937 rng(11);
    const auto psi = random_state(4, 8, rng);
    std::uniform_real_distribution<double> angle(-1.5, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
      const Excitation rex = random_excitation(8, rng);
      const double theta = angle(rng);
      const double h = 1e-5;
      auto plus = qucc::apply_factor(UccFactor{rex, theta + h}, psi);
      const auto minus = qucc::apply_factor(UccFactor{rex, theta - h}, psi);
      const auto der = qucc::apply_factor_derivative(UccFactor{rex, theta}, psi, 1);
      // max |(plus - minus)/2h - der| over the union support
      StateVector diff = plus;
      for (const auto& [d, a] : minus) diff.add(d, -a);
      diff.scale(1.0 / (2.0 * h));
      for (const auto& [d, a] : der) diff.add(d, -a);
      double max_err = 0.0;
      for (const auto& [d, a] : diff) max_err = std::max(max_err, std::abs(a));
      CHECK(max_err < 1e-8);
    }
  }
  SUBCASE("order 2 matches second differences of apply_factor") {
    std::mt19937 rng(13);
    const auto psi = random_state(4, 8, rng);
    const Excitation rex = random_excitation(8, rng);
    const double theta = 0.4, h = 1e-4;
    const auto plus = qucc::apply_factor(UccFactor{rex, theta + h}, psi);
    const auto mid = qucc::apply_factor(UccFactor{rex, theta}, psi);
    const auto minus = qucc::apply_factor(UccFactor{rex, theta - h}, psi);
    const auto der2 = qucc::apply_factor_derivative(UccFactor{rex, theta}, psi, 2);
    StateVector diff = plus;
    for (const auto& [d, a] : minus) diff.add(d, a);
    for (const auto& [d, a] : mid) diff.add(d, -2.0 * a);
    diff.scale(1.0 / (h * h));
    for (const auto& [d, a] : der2) diff.add(d, -a);
    double max_err = 0.0;
    for (const auto& [d, a] : diff) max_err = std::max(max_err, std::abs(a));
    CHECK(max_err < 1e-6);
  }
}

TEST_CASE("factor properties") {
  std::mt19937 rng(555);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 40; ++trial) {
    const Excitation ex = random_excitation(8, rng);
    const double theta = angle(rng);
    const auto psi = random_state(4, 10, rng);
    const auto rotated = qucc::apply_factor(UccFactor{ex, theta}, psi);

    // unitarity
    CHECK(rotated.norm() == doctest::Approx(psi.norm()).epsilon(1e-12));
    // support growth bounded by a factor of two
    CHECK(rotated.size() <= 2 * psi.size());
    // inverse
    const auto back = qucc::apply_factor(UccFactor{ex, -theta}, rotated);
    double max_err = 0.0;
    StateVector diff = back;
    for (const auto& [d, a] : psi) diff.add(d, -a);
    for (const auto& [d, a] : diff) max_err = std::max(max_err, std::abs(a));
    CHECK(max_err < 1e-12);
    // 2-pi periodicity
    const auto wrapped = qucc::apply_factor(UccFactor{ex, theta + 2.0 * std::numbers::pi}, psi);
    StateVector pdiff = wrapped;
    for (const auto& [d, a] : rotated) pdiff.add(d, -a);
    max_err = 0.0;
    for (const auto& [d, a] : pdiff) max_err = std::max(max_err, std::abs(a));
    CHECK(max_err < 1e-12);
  }
}

TEST_CASE("non-finite angles are rejected") {
  const Excitation ex{{0}, {2}};
  StateVector psi(Determinant{1, 0});
  CHECK_THROWS_AS(qucc::apply_factor(UccFactor{ex, std::nan("")}, psi), std::invalid_argument);
}

TEST_CASE("apply_sequence") {
  const auto& st = fixtures::h2().store;
  const Determinant hf = qucc::reference_determinant(st);
  const StateVector hf_state(hf);

  SUBCASE("empty sequence is the identity") {
    const auto out = qucc::apply_sequence({}, hf_state);
    CHECK(out.size() == 1);
    CHECK(out.amplitude(hf) == 1.0);
  }
  SUBCASE("all angles zero with one first-order flag yields the bare generator") {
    qucc::FactorSequence seq = {UccFactor{Excitation{{0}, {2}}, 0.0},
                                UccFactor{Excitation{{0, 1}, {2, 3}}, 0.0},
                                UccFactor{Excitation{{1}, {3}}, 0.0}};
    const qucc::DerivativeFlag fl[1] = {{1, 1}};
    const auto out = qucc::apply_sequence(seq, hf_state, fl);
    const auto expected =
        qucc::apply_factor_derivative(UccFactor{Excitation{{0, 1}, {2, 3}}, 0.0}, hf_state, 1);
    REQUIRE(out.size() == expected.size());
    for (const auto& [d, a] : expected)
      CHECK(out.amplitude(d) == doctest::Approx(a).epsilon(1e-15));
  }
  SUBCASE("flagged second derivatives match a finite-difference Hessian") {
    const auto& st4 = fixtures::h4(1.5).store;
    const auto pool = qucc::enumerate_singles_doubles(st4);
    const StateVector ref(qucc::reference_determinant(st4));
    const auto psi = ref;  // fixed bra
    qucc::FactorSequence seq;
    seq.push_back(UccFactor{pool[8], 0.31});
    seq.push_back(UccFactor{pool[12], -0.22});

    auto f = [&](double t0, double t1) {
      qucc::FactorSequence s = seq;
      s[0].theta = t0;
      s[1].theta = t1;
      return qucc::matrix_element_H(st4, psi, qucc::apply_sequence(s, ref));
    };
    const double h = 1e-4;
    const double fd01 = (f(seq[0].theta + h, seq[1].theta + h) -
                         f(seq[0].theta + h, seq[1].theta - h) -
                         f(seq[0].theta - h, seq[1].theta + h) +
                         f(seq[0].theta - h, seq[1].theta - h)) /
                        (4.0 * h * h);
    const qucc::DerivativeFlag fl01[2] = {{0, 1}, {1, 1}};
    const double an01 =
        qucc::matrix_element_H(st4, psi, qucc::apply_sequence(seq, ref, fl01));
    CHECK(an01 == doctest::Approx(fd01).epsilon(1e-7).scale(1.0));

    const double fd00 =
        (f(seq[0].theta + h, seq[1].theta) - 2.0 * f(seq[0].theta, seq[1].theta) +
         f(seq[0].theta - h, seq[1].theta)) /
        (h * h);
    const qucc::DerivativeFlag fl00[1] = {{0, 2}};
    const double an00 =
        qucc::matrix_element_H(st4, psi, qucc::apply_sequence(seq, ref, fl00));
    CHECK(an00 == doctest::Approx(fd00).epsilon(1e-7).scale(1.0));
  }
  SUBCASE("flag validation") {
    qucc::FactorSequence seq = {UccFactor{Excitation{{0}, {2}}, 0.1}};
    const qucc::DerivativeFlag bad_pos[1] = {{4, 1}};
    CHECK_THROWS_AS(qucc::apply_sequence(seq, hf_state, bad_pos), std::invalid_argument);
    const qucc::DerivativeFlag over[2] = {{0, 2}, {0, 1}};
    CHECK_THROWS_AS(qucc::apply_sequence(seq, hf_state, over), std::invalid_argument);
  }
}
