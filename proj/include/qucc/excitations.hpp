#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "determinant.hpp"
#include "integrals.hpp"

namespace qucc {

/// Particle-hole excitation specified by interleaved spin-orbital indices:
/// `occ` lists reference-occupied orbitals to empty, `vir` reference-virtual
/// orbitals to fill. Both lists sorted ascending, disjoint.
struct Excitation {
  std::vector<int> occ;
  std::vector<int> vir;

  int rank() const { return static_cast<int>(occ.size()); }
  friend bool operator==(const Excitation&, const Excitation&) = default;
};

/// One unitary rotation factor exp[theta (a_ex - a_deex)].
struct UccFactor {
  Excitation excitation;
  double theta = 0.0;
};

/// All Sz-conserving singles, then all Sz-conserving doubles, in a fixed
/// canonical order: occupied and virtual lists ascending, doubles with i<j and
/// a<b, outer loops over the lower index.
inline std::vector<Excitation> enumerate_singles_doubles(const IntegralStore& st) {
  const Determinant ref = reference_determinant(st.n_alpha(), st.n_beta());
  std::vector<int> occ_so, vir_so;
  for (int so = 0; so < st.n_spin_orbitals(); ++so)
    (ref.occupied(so) ? occ_so : vir_so).push_back(so);

  std::vector<Excitation> pool;
  for (int i : occ_so)
    for (int a : vir_so)
      if (is_beta(i) == is_beta(a)) pool.push_back({{i}, {a}});

  const auto n_occ = occ_so.size();
  const auto n_vir = vir_so.size();
  for (std::size_t oi = 0; oi < n_occ; ++oi)
    for (std::size_t oj = oi + 1; oj < n_occ; ++oj) {
      const int i = occ_so[oi], j = occ_so[oj];
      const int occ_betas = static_cast<int>(is_beta(i)) + static_cast<int>(is_beta(j));
      for (std::size_t va = 0; va < n_vir; ++va)
        for (std::size_t vb = va + 1; vb < n_vir; ++vb) {
          const int a = vir_so[va], b = vir_so[vb];
          if (static_cast<int>(is_beta(a)) + static_cast<int>(is_beta(b)) != occ_betas) continue;
          pool.push_back({{i, j}, {a, b}});
        }
    }
  return pool;
}

/// First-order Moller-Plesset amplitudes for the pool: doubles get
/// <ij||ab> / (eps_i + eps_j - eps_a - eps_b), singles 0 by Brillouin's
/// theorem. A near-zero denominator (|d| < 1e-8) marks the excitation
/// degenerate and its amplitude is reported as +infinity so it always screens
/// into the large-angle set.
inline std::vector<double> mp2_amplitudes(const IntegralStore& st,
                                          const std::vector<Excitation>& pool) {
  const std::vector<double> eps = fock_diagonal(st);
  std::vector<double> t(pool.size(), 0.0);
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const Excitation& ex = pool[k];
    if (ex.rank() != 2) continue;
    const int i = ex.occ[0], j = ex.occ[1], a = ex.vir[0], b = ex.vir[1];
    const double den = eps[i] + eps[j] - eps[a] - eps[b];
    if (std::abs(den) < 1e-8) {
      t[k] = std::numeric_limits<double>::infinity();
      continue;
    }
    double num = 0.0;
    if (is_beta(i) == is_beta(a) && is_beta(j) == is_beta(b))
      num += st.eri(spatial_index(i), spatial_index(a), spatial_index(j), spatial_index(b));
    if (is_beta(i) == is_beta(b) && is_beta(j) == is_beta(a))
      num -= st.eri(spatial_index(i), spatial_index(b), spatial_index(j), spatial_index(a));
    t[k] = num / den;
  }
  return t;
}

/// Indices of the M largest-|amplitude| pool members (only nonzero amplitudes
/// are eligible; degenerate +inf entries rank first; ties break toward the
/// lower pool index). Returned sorted ascending, i.e. in pool order.
inline std::vector<int> select_large_factors(const std::vector<double>& amplitudes, int m) {
  if (m < 0) throw std::invalid_argument("selection count must be non-negative");
  std::vector<int> idx;
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    if (std::isnan(amplitudes[k]))
      throw std::invalid_argument("amplitude " + std::to_string(k) + " is NaN");
    if (amplitudes[k] != 0.0) idx.push_back(static_cast<int>(k));
  }
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::abs(amplitudes[a]) > std::abs(amplitudes[b]);
  });
  if (idx.size() > static_cast<std::size_t>(m)) idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace qucc
