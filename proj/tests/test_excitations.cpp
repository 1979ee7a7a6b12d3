#include <doctest.h>

#include <qucc/excitations.hpp>
#include <qucc/slater_condon.hpp>

#include <cmath>
#include <limits>

#include "support/fixtures.hpp"

using qucc::Excitation;

TEST_CASE("H2 pool: two singles then the one double") {
  const auto pool = qucc::enumerate_singles_doubles(fixtures::h2().store);
  REQUIRE(pool.size() == 3);
  CHECK(pool[0] == Excitation{{0}, {2}});  // alpha 0 -> 1
  CHECK(pool[1] == Excitation{{1}, {3}});  // beta 0 -> 1
  CHECK(pool[2] == Excitation{{0, 1}, {2, 3}});
}

TEST_CASE("fully occupied spin channel leaves an empty pool") {
  qucc::IntegralStore st(2, 2, 0, 0.0);
  CHECK(qucc::enumerate_singles_doubles(st).empty());
}

TEST_CASE("H4 pool size matches a brute-force enumeration") {
  const auto& st = fixtures::h4(1.5).store;
  const auto pool = qucc::enumerate_singles_doubles(st);

  // independent count over raw spin-orbital tuples
  const int n_so = st.n_spin_orbitals();
  const auto ref = qucc::reference_determinant(st);
  int singles = 0, doubles = 0;
  for (int i = 0; i < n_so; ++i)
    for (int a = 0; a < n_so; ++a) {
      if (!ref.occupied(i) || ref.occupied(a)) continue;
      if (qucc::is_beta(i) != qucc::is_beta(a)) continue;
      ++singles;
    }
  for (int i = 0; i < n_so; ++i)
    for (int j = i + 1; j < n_so; ++j)
      for (int a = 0; a < n_so; ++a)
        for (int b = a + 1; b < n_so; ++b) {
          if (!ref.occupied(i) || !ref.occupied(j)) continue;
          if (ref.occupied(a) || ref.occupied(b)) continue;
          const int za = static_cast<int>(qucc::is_beta(i)) + static_cast<int>(qucc::is_beta(j));
          const int zb = static_cast<int>(qucc::is_beta(a)) + static_cast<int>(qucc::is_beta(b));
          if (za != zb) continue;
          ++doubles;
        }
  CHECK(static_cast<int>(pool.size()) == singles + doubles);
  CHECK(singles == 8);
  CHECK(doubles == 18);
}

TEST_CASE("every pool excitation applies to the reference without vanishing") {
  for (const auto* sys : {&fixtures::h2(), &fixtures::h4(1.5), &fixtures::h2o()}) {
    const auto& st = sys->store;
    const auto ref = qucc::reference_determinant(st);
    for (const auto& ex : qucc::enumerate_singles_doubles(st))
      CHECK(qucc::apply_spin_orbital_ops(ref, ex.vir, ex.occ).has_value());
  }
}

TEST_CASE("mp2 amplitudes") {
  SUBCASE("singles are zero by Brillouin") {
    const auto& st = fixtures::h4(1.5).store;
    const auto pool = qucc::enumerate_singles_doubles(st);
    const auto t = qucc::mp2_amplitudes(st, pool);
    for (std::size_t k = 0; k < pool.size(); ++k)
      if (pool[k].rank() == 1) CHECK(t[k] == 0.0);
  }
  SUBCASE("zero numerator gives zero amplitude") {
    qucc::IntegralStore st(2, 1, 1, 0.0);
    st.set_h(0, 0, -1.0);
    st.set_h(1, 1, 1.0);  // distinct diagonal, all two-electron integrals zero
    const auto pool = qucc::enumerate_singles_doubles(st);
    const auto t = qucc::mp2_amplitudes(st, pool);
    for (std::size_t k = 0; k < pool.size(); ++k)
      if (pool[k].rank() == 2) CHECK(t[k] == 0.0);
  }
  SUBCASE("H2 double matches the textbook expression") {
    const auto& st = fixtures::h2().store;
    const auto pool = qucc::enumerate_singles_doubles(st);
    const auto t = qucc::mp2_amplitudes(st, pool);
    const auto eps = qucc::fock_diagonal(st);
    // t = (01|01) / (2 eps_0 - 2 eps_1), evaluated directly from the store
    const double expected = st.eri(0, 1, 0, 1) / (eps[0] + eps[1] - eps[2] - eps[3]);
    CHECK(t[2] == doctest::Approx(expected).epsilon(1e-14));
    CHECK(t[2] < 0.0);
  }
  SUBCASE("degenerate denominator flags as infinite") {
    // all integrals zero -> every orbital energy zero -> degenerate double
    qucc::IntegralStore st(2, 1, 1, 0.0);
    const auto pool = qucc::enumerate_singles_doubles(st);
    const auto t = qucc::mp2_amplitudes(st, pool);
    CHECK(std::isinf(t[2]));
    CHECK(qucc::select_large_factors(t, 1) == std::vector<int>{2});
  }
}

TEST_CASE("select_large_factors") {
  SUBCASE("M = 0 selects nothing") {
    CHECK(qucc::select_large_factors({0.3, -0.5, 0.1}, 0).empty());
  }
  SUBCASE("magnitude sort") {
    const auto sel = qucc::select_large_factors({0.3, -0.5, 0.1}, 2);
    CHECK(sel == std::vector<int>{0, 1});
  }
  SUBCASE("M beyond the pool keeps every nonzero amplitude") {
    const auto sel = qucc::select_large_factors({0.3, 0.0, 0.1, 0.0}, 10);
    CHECK(sel == std::vector<int>{0, 2});
  }
  SUBCASE("degenerate-flagged amplitudes rank first") {
    const double inf = std::numeric_limits<double>::infinity();
    const auto sel = qucc::select_large_factors({0.4, inf, 0.5}, 1);
    CHECK(sel == std::vector<int>{1});
  }
  SUBCASE("ties break toward the lower pool index") {
    const auto sel = qucc::select_large_factors({0.5, -0.5}, 1);
    CHECK(sel == std::vector<int>{0});
  }
  SUBCASE("negative M is rejected") {
    CHECK_THROWS_AS(qucc::select_large_factors({0.1}, -1), std::invalid_argument);
  }
  SUBCASE("NaN amplitudes are rejected before they can poison the ranking") {
    CHECK_THROWS_AS(qucc::select_large_factors({0.1, std::nan("")}, 1), std::invalid_argument);
  }
}
