#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "determinant.hpp"
#include "excitations.hpp"
#include "state_vector.hpp"

namespace qucc {

namespace detail {

enum class FactorAction { excite, deexcite, none };

// Which side of the SU(2) pair a determinant sits on: `excite` when every
// occ index is filled and every vir index empty (the de-excitation projector's
// support), `deexcite` for the mirror image, `none` otherwise.
inline FactorAction classify(const Determinant& d, const Excitation& ex) {
  bool occ_filled = true, vir_empty = true;
  for (int so : ex.occ) occ_filled = occ_filled && d.occupied(so);
  for (int so : ex.vir) vir_empty = vir_empty && !d.occupied(so);
  if (occ_filled && vir_empty) return FactorAction::excite;
  bool vir_filled = true, occ_empty = true;
  for (int so : ex.vir) vir_filled = vir_filled && d.occupied(so);
  for (int so : ex.occ) occ_empty = occ_empty && !d.occupied(so);
  if (vir_filled && occ_empty) return FactorAction::deexcite;
  return FactorAction::none;
}

}  // namespace detail

// Exact factor application via the closed SU(2) form
//   U(theta) = 1 + sin(theta) (a_ex - a_deex) + (cos(theta)-1)(P_ex + P_deex):
// each stored determinant either rotates against its unique excitation partner
// or passes through unchanged, so the support at most doubles and no operator
// matrix is ever materialized.
inline StateVector apply_factor(const UccFactor& f, const StateVector& psi,
                                double drop_tol = StateVector::default_drop_tol) {
  if (!std::isfinite(f.theta)) throw std::invalid_argument("factor angle must be finite");
  const Excitation& ex = f.excitation;
  const double c = std::cos(f.theta);
  const double s = std::sin(f.theta);
  StateVector out;
  for (const auto& [d, amp] : psi) {
    switch (detail::classify(d, ex)) {
      case detail::FactorAction::excite: {
        out.add(d, amp * c);
        const auto r = apply_spin_orbital_ops(d, ex.vir, ex.occ);
        out.add(r->det, amp * s * r->sign);
        break;
      }
      case detail::FactorAction::deexcite: {
        out.add(d, amp * c);
        const auto r = apply_spin_orbital_ops(d, ex.occ, ex.vir);
        out.add(r->det, -amp * s * r->sign);
        break;
      }
      case detail::FactorAction::none:
        out.add(d, amp);
        break;
    }
  }
  out.compact(drop_tol);
  return out;
}

/// Analytic theta-derivatives of the factor. Order 1:
/// cos(theta)(a_ex - a_deex) - sin(theta)(P_ex + P_deex); order 2 is its
/// derivative once more. At theta = 0 order 1 reduces to the generator itself.
inline StateVector apply_factor_derivative(const UccFactor& f, const StateVector& psi, int order,
                                           double drop_tol = StateVector::default_drop_tol) {
  if (order != 1 && order != 2) throw std::invalid_argument("derivative order must be 1 or 2");
  if (!std::isfinite(f.theta)) throw std::invalid_argument("factor angle must be finite");
  const Excitation& ex = f.excitation;
  // order 1: sigma-coefficient cos, projector-coefficient -sin
  // order 2: sigma-coefficient -sin, projector-coefficient -cos
  const double sig = order == 1 ? std::cos(f.theta) : -std::sin(f.theta);
  const double prj = order == 1 ? -std::sin(f.theta) : -std::cos(f.theta);
  StateVector out;
  for (const auto& [d, amp] : psi) {
    switch (detail::classify(d, ex)) {
      case detail::FactorAction::excite: {
        out.add(d, amp * prj);
        const auto r = apply_spin_orbital_ops(d, ex.vir, ex.occ);
        out.add(r->det, amp * sig * r->sign);
        break;
      }
      case detail::FactorAction::deexcite: {
        out.add(d, amp * prj);
        const auto r = apply_spin_orbital_ops(d, ex.occ, ex.vir);
        out.add(r->det, -amp * sig * r->sign);
        break;
      }
      case detail::FactorAction::none:
        break;
    }
  }
  out.compact(drop_tol);
  return out;
}

/// Ordered factor product; element 0 acts on the state first (it is the
/// rightmost factor of the written product). Two sequences with permuted
/// factors are distinct values.
using FactorSequence = std::vector<UccFactor>;

struct DerivativeFlag {
  int position = 0;
  int order = 1;
};

/// Applies the sequence, substituting the analytic derivative at flagged
/// positions. The combined derivative order across all flags may not exceed 2.
inline StateVector apply_sequence(const FactorSequence& seq, const StateVector& psi,
                                  std::span<const DerivativeFlag> flags = {},
                                  double drop_tol = StateVector::default_drop_tol) {
  std::vector<int> order(seq.size(), 0);
  int total = 0;
  for (const auto& fl : flags) {
    if (fl.position < 0 || fl.position >= static_cast<int>(seq.size()))
      throw std::invalid_argument("derivative position out of range");
    if (fl.order != 1 && fl.order != 2)
      throw std::invalid_argument("derivative order must be 1 or 2");
    order[fl.position] += fl.order;
    total += fl.order;
  }
  if (total > 2) throw std::invalid_argument("total derivative order exceeds 2");

  StateVector cur = psi;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    cur = order[k] == 0 ? apply_factor(seq[k], cur, drop_tol)
                        : apply_factor_derivative(seq[k], cur, order[k], drop_tol);
  }
  return cur;
}

}  // namespace qucc
