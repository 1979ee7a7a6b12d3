#pragma once

// Shared test fixtures: integral stores generated at runtime by the STO-3G
// RHF machinery in tools/scfgen.hpp, plus small hand-built stores. Cached so
// that each test binary pays for SCF once per system.

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include <qucc/integrals.hpp>

#include "scfgen.hpp"

namespace fixtures {

struct GeneratedSystem {
  scfgen::RhfResult scf;
  qucc::IntegralStore store;
};

inline const GeneratedSystem& h2() {
  static const GeneratedSystem sys = [] {
    const auto atoms = scfgen::h2(1.4);
    auto scf = scfgen::rhf(atoms);
    auto store = scfgen::mo_integral_store(atoms, scf);
    return GeneratedSystem{std::move(scf), std::move(store)};
  }();
  return sys;
}

inline const GeneratedSystem& h4(double spacing) {
  static std::map<double, GeneratedSystem> cache;  // node-stable references
  const auto it = cache.find(spacing);
  if (it != cache.end()) return it->second;
  const auto atoms = scfgen::h_chain(4, spacing);
  auto scf = scfgen::rhf(atoms);
  auto store = scfgen::mo_integral_store(atoms, scf);
  return cache.emplace(spacing, GeneratedSystem{std::move(scf), std::move(store)})
      .first->second;
}

inline const GeneratedSystem& h2o() {
  static const GeneratedSystem sys = [] {
    const auto atoms = scfgen::water();
    auto scf = scfgen::rhf(atoms);
    auto store = scfgen::mo_integral_store(atoms, scf);
    return GeneratedSystem{std::move(scf), std::move(store)};
  }();
  return sys;
}

/// Random symmetric integral store over n orbitals, reproducible by seed.
/// Values are small enough that Hamiltonians stay well-behaved.
inline qucc::IntegralStore random_store(int n_spatial, int n_alpha, int n_beta,
                                        unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  qucc::IntegralStore st(n_spatial, n_alpha, n_beta, 0.25 * dist(rng));
  for (int p = 0; p < n_spatial; ++p)
    for (int q = 0; q <= p; ++q) st.set_h(p, q, dist(rng));
  for (int p = 0; p < n_spatial; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= r; ++s) {
          if (r * (r + 1) / 2 + s > p * (p + 1) / 2 + q) continue;
          st.set_eri(p, q, r, s, 0.5 * dist(rng));
        }
  return st;
}

}  // namespace fixtures
