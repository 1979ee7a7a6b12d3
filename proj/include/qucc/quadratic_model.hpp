#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "excitations.hpp"
#include "factor_ops.hpp"
#include "integrals.hpp"
#include "slater_condon.hpp"
#include "state_vector.hpp"

namespace qucc {

/// Second-order energy model about a reference: E(theta) ~ e_ref + b.theta
/// + 1/2 theta^T A theta over the factor pool.
struct QuadraticModel {
  double e_ref = 0.0;
  Eigen::VectorXd b;
  Eigen::MatrixXd A;
  std::vector<Excitation> pool;
};

/// A pool member applied exactly with its current rotation angle.
struct LargeFactor {
  int pool_index = 0;
  double theta = 0.0;
};

namespace detail {

// Generator action sigma = a_ex - a_deex, realized as the order-1 factor
// derivative at theta = 0.
inline StateVector apply_sigma(const Excitation& ex, const StateVector& v) {
  return apply_factor_derivative(UccFactor{ex, 0.0}, v, 1);
}

// Ordering convention for products over pool members: ascending pool index
// from left to right, so the highest index acts on the reference first. Under
// this convention (sigma_k sigma_m) with m >= k — sigma_m applied first,
// sigma_k leftmost — is the literal mixed second derivative of the product,
// which is what the finite-difference oracles check against.
inline FactorSequence reference_sequence(const std::vector<Excitation>& pool,
                                         const std::vector<LargeFactor>& large_sorted) {
  FactorSequence seq;
  seq.reserve(large_sorted.size());
  for (auto it = large_sorted.rbegin(); it != large_sorted.rend(); ++it)
    seq.push_back(UccFactor{pool[it->pool_index], it->theta});
  return seq;
}

inline std::vector<LargeFactor> sorted_large(const std::vector<Excitation>& pool,
                                             const std::vector<LargeFactor>& large) {
  std::vector<LargeFactor> sorted = large;
  std::sort(sorted.begin(), sorted.end(),
            [](const LargeFactor& a, const LargeFactor& b) { return a.pool_index < b.pool_index; });
  for (std::size_t r = 0; r < sorted.size(); ++r) {
    if (sorted[r].pool_index < 0 || sorted[r].pool_index >= static_cast<int>(pool.size()))
      throw std::invalid_argument("large-factor pool index out of range");
    if (r > 0 && sorted[r].pool_index == sorted[r - 1].pool_index)
      throw std::invalid_argument("duplicate large-factor pool index");
    if (!std::isfinite(sorted[r].theta))
      throw std::invalid_argument("large-factor angle must be finite");
  }
  return sorted;
}

}  // namespace detail

/// Model about the Hartree-Fock determinant (all angles zero):
///   b_k  = 2 <HF|H sigma_k|HF>
///   A_km = 2 <HF|sigma_k^+ H sigma_m|HF> + 2 <HF|H (sigma_k sigma_m)|HF>
/// with (sigma_k sigma_m) ordered sigma_k sigma_m for m >= k. Every entry
/// reduces to at most three Slater-Condon calls because each sigma image of a
/// determinant holds at most two determinants.
inline QuadraticModel build_model_hf(const IntegralStore& st,
                                     const std::vector<Excitation>& pool) {
  const Determinant hf = reference_determinant(st);
  const int n = static_cast<int>(pool.size());
  QuadraticModel model;
  model.pool = pool;
  model.e_ref = slater_condon(st, hf, hf);
  model.b = Eigen::VectorXd::Zero(n);
  model.A = Eigen::MatrixXd::Zero(n, n);

  std::vector<Determinant> dets(n);
  std::vector<int> signs(n);
  for (int k = 0; k < n; ++k) {
    const auto r = apply_spin_orbital_ops(hf, pool[k].vir, pool[k].occ);
    if (!r) throw std::invalid_argument("pool excitation is vacuous on the reference");
    dets[k] = r->det;
    signs[k] = r->sign;
    model.b(k) = 2.0 * signs[k] * slater_condon(st, hf, dets[k]);
  }

  for (int k = 0; k < n; ++k) {
    for (int m = k; m < n; ++m) {
      const double t1 = 2.0 * signs[k] * signs[m] * slater_condon(st, dets[k], dets[m]);
      // (sigma_k sigma_m)|HF> = sigma_k (s_m |D_m>), m >= k
      double t2 = 0.0;
      if (const auto r = apply_spin_orbital_ops(dets[m], pool[k].vir, pool[k].occ))
        t2 += signs[m] * r->sign * slater_condon(st, hf, r->det);
      if (const auto r = apply_spin_orbital_ops(dets[m], pool[k].occ, pool[k].vir))
        t2 -= signs[m] * r->sign * slater_condon(st, hf, r->det);
      model.A(k, m) = model.A(m, k) = t1 + 2.0 * t2;
    }
  }
  return model;
}

/// Model about an exact multi-factor reference |Psi0> = prod_l U_l(theta_l)|HF>
/// built from the large-angle factors in pool order. Small-angle entries use
/// the HF formulas with |Psi0> in place of |HF>; large-angle entries are exact
/// derivatives of the factorized product at the current angles, with the
/// derivative factor substituted in place. Mixed entries put the small-angle
/// generator to the left of the whole reference product.
inline QuadraticModel build_model_ucc_ref(const IntegralStore& st,
                                          const std::vector<Excitation>& pool,
                                          const std::vector<LargeFactor>& large) {
  if (large.empty()) return build_model_hf(st, pool);
  const auto large_sorted = detail::sorted_large(pool, large);
  const int n = static_cast<int>(pool.size());
  const int n_large = static_cast<int>(large_sorted.size());

  const StateVector hf_state(reference_determinant(st));
  const FactorSequence seq = detail::reference_sequence(pool, large_sorted);
  std::vector<int> seq_pos(n, -1);  // pool index -> position in seq
  for (int r = 0; r < n_large; ++r) seq_pos[large_sorted[r].pool_index] = n_large - 1 - r;

  const StateVector psi0 = apply_sequence(seq, hf_state);

  QuadraticModel model;
  model.pool = pool;
  model.e_ref = expectation_H(st, psi0);
  model.b = Eigen::VectorXd::Zero(n);
  model.A = Eigen::MatrixXd::Zero(n, n);

  std::vector<StateVector> dpsi(n);
  for (int k = 0; k < n; ++k) {
    if (seq_pos[k] >= 0) {
      const DerivativeFlag fl[1] = {{seq_pos[k], 1}};
      dpsi[k] = apply_sequence(seq, hf_state, fl);
    } else {
      dpsi[k] = detail::apply_sigma(pool[k], psi0);
    }
    model.b(k) = 2.0 * matrix_element_H(st, psi0, dpsi[k]);
  }

  for (int k = 0; k < n; ++k) {
    for (int m = k; m < n; ++m) {
      const double t1 = 2.0 * matrix_element_H(st, dpsi[k], dpsi[m]);
      StateVector second;
      const bool kl = seq_pos[k] >= 0;
      const bool ml = seq_pos[m] >= 0;
      if (!kl && !ml) {
        second = detail::apply_sigma(pool[k], dpsi[m]);
      } else if (kl && ml) {
        if (k == m) {
          const DerivativeFlag fl[1] = {{seq_pos[k], 2}};
          second = apply_sequence(seq, hf_state, fl);
        } else {
          const DerivativeFlag fl[2] = {{seq_pos[k], 1}, {seq_pos[m], 1}};
          second = apply_sequence(seq, hf_state, fl);
        }
      } else {
        const int small = kl ? m : k;
        const int big = kl ? k : m;
        second = detail::apply_sigma(pool[small], dpsi[big]);
      }
      model.A(k, m) = model.A(m, k) = t1 + 2.0 * matrix_element_H(st, psi0, second);
    }
  }
  return model;
}

}  // namespace qucc
