#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "determinant.hpp"
#include "integrals.hpp"
#include "state_vector.hpp"

namespace qucc {

inline Determinant reference_determinant(const IntegralStore& st) {
  return reference_determinant(st.n_alpha(), st.n_beta());
}

namespace detail {

// Spatial orbitals of the (at most two) set bits of a mask, ascending.
inline std::array<int, 2> two_bits(std::uint64_t mask) {
  std::array<int, 2> out{-1, -1};
  out[0] = std::countr_zero(mask);
  mask &= mask - 1;
  out[1] = mask ? std::countr_zero(mask) : -1;
  return out;
}

// Mean-field interaction of the common occupation with a one-particle move
// m <- p in channel `beta`: sum_q [(mp|qq) - delta_spin (mq|qp)].
inline double single_mean_field(const IntegralStore& st, int m, int p, bool beta,
                                std::uint64_t common_alpha, std::uint64_t common_beta) {
  double v = 0.0;
  for (std::uint64_t rest = common_alpha; rest; rest &= rest - 1) {
    const int q = std::countr_zero(rest);
    v += st.eri(m, p, q, q);
    if (!beta) v -= st.eri(m, q, q, p);
  }
  for (std::uint64_t rest = common_beta; rest; rest &= rest - 1) {
    const int q = std::countr_zero(rest);
    v += st.eri(m, p, q, q);
    if (beta) v -= st.eri(m, q, q, p);
  }
  return v;
}

}  // namespace detail

/// Hamiltonian matrix element <bra|H|ket> between Slater determinants,
/// e_core included on the diagonal, zero beyond excitation degree 2. Phases
/// follow the interleaved spin-orbital order, equivalent to maximum-coincidence
/// alignment of the two determinants.
inline double slater_condon(const IntegralStore& st, const Determinant& bra,
                            const Determinant& ket) {
  if (std::popcount(bra.alpha) != std::popcount(ket.alpha) ||
      std::popcount(bra.beta) != std::popcount(ket.beta))
    return 0.0;
  const std::uint64_t xa = bra.alpha ^ ket.alpha;
  const std::uint64_t xb = bra.beta ^ ket.beta;
  const int da = std::popcount(xa) / 2;
  const int db = std::popcount(xb) / 2;
  if (da + db > 2) return 0.0;

  if (da + db == 0) {
    double e = st.e_core();
    for (int spin = 0; spin < 2; ++spin) {
      const std::uint64_t occ = spin == 0 ? ket.alpha : ket.beta;
      for (std::uint64_t rest = occ; rest; rest &= rest - 1) {
        const int p = std::countr_zero(rest);
        e += st.h(p, p);
        // same-spin Coulomb minus exchange
        for (std::uint64_t r2 = occ; r2; r2 &= r2 - 1) {
          const int q = std::countr_zero(r2);
          e += 0.5 * (st.eri(p, p, q, q) - st.eri(p, q, q, p));
        }
        // opposite-spin Coulomb
        const std::uint64_t other = spin == 0 ? ket.beta : ket.alpha;
        for (std::uint64_t r2 = other; r2; r2 &= r2 - 1) {
          const int q = std::countr_zero(r2);
          e += 0.5 * st.eri(p, p, q, q);
        }
      }
    }
    return e;
  }

  if (da + db == 1) {
    const bool beta = db == 1;
    const std::uint64_t x = beta ? xb : xa;
    const std::uint64_t bra_ch = beta ? bra.beta : bra.alpha;
    const std::uint64_t ket_ch = beta ? ket.beta : ket.alpha;
    const int m = std::countr_zero(bra_ch & x);
    const int p = std::countr_zero(ket_ch & x);
    const std::uint64_t common_ch = ket_ch & ~(std::uint64_t{1} << p);
    const std::uint64_t common_alpha = beta ? ket.alpha : common_ch;
    const std::uint64_t common_beta = beta ? common_ch : ket.beta;
    double v = st.h(m, p) + detail::single_mean_field(st, m, p, beta, common_alpha, common_beta);
    const int cre[1] = {spin_orbital(m, beta)};
    const int ann[1] = {spin_orbital(p, beta)};
    const auto r = apply_spin_orbital_ops(ket, cre, ann);
    return r->sign * v;
  }

  if (da == 1 && db == 1) {
    const int ia = std::countr_zero(ket.alpha & xa);
    const int aa = std::countr_zero(bra.alpha & xa);
    const int ib = std::countr_zero(ket.beta & xb);
    const int ab = std::countr_zero(bra.beta & xb);
    // two sequential one-particle moves; the cross-channel phase is their product
    const int cre_a[1] = {spin_orbital(aa, false)};
    const int ann_a[1] = {spin_orbital(ia, false)};
    const auto r1 = apply_spin_orbital_ops(ket, cre_a, ann_a);
    const int cre_b[1] = {spin_orbital(ab, true)};
    const int ann_b[1] = {spin_orbital(ib, true)};
    const auto r2 = apply_spin_orbital_ops(r1->det, cre_b, ann_b);
    return r1->sign * r2->sign * st.eri(aa, ia, ab, ib);
  }

  // same-spin double
  const bool beta = db == 2;
  const std::uint64_t x = beta ? xb : xa;
  const auto ij = detail::two_bits((beta ? ket.beta : ket.alpha) & x);
  const auto ab = detail::two_bits((beta ? bra.beta : bra.alpha) & x);
  const int cre[2] = {spin_orbital(ab[0], beta), spin_orbital(ab[1], beta)};
  const int ann[2] = {spin_orbital(ij[0], beta), spin_orbital(ij[1], beta)};
  const auto r = apply_spin_orbital_ops(ket, cre, ann);
  return r->sign * (st.eri(ab[0], ij[0], ab[1], ij[1]) - st.eri(ab[0], ij[1], ab[1], ij[0]));
}

inline double hf_energy(const IntegralStore& st) {
  const Determinant ref = reference_determinant(st);
  return slater_condon(st, ref, ref);
}

/// <bra|H|ket> between sparse states; pairs beyond excitation degree 2 are
/// skipped before any integral work.
inline double matrix_element_H(const IntegralStore& st, const StateVector& bra,
                               const StateVector& ket) {
  double e = 0.0;
  for (const auto& [d1, a1] : bra) {
    for (const auto& [d2, a2] : ket) {
      if (d1.degree_to(d2) > 2) continue;
      e += a1 * a2 * slater_condon(st, d1, d2);
    }
  }
  return e;
}

/// Energy expectation of a normalized state; norm may deviate from 1 by at
/// most 1e-8.
inline double expectation_H(const IntegralStore& st, const StateVector& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("expectation_H requires a normalized state");
  return matrix_element_H(st, psi, psi);
}

}  // namespace qucc
