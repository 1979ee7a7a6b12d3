#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "excitations.hpp"
#include "factor_ops.hpp"
#include "integrals.hpp"
#include "linear_solver.hpp"
#include "quadratic_model.hpp"
#include "slater_condon.hpp"

namespace qucc {

struct QuccConfig {
  int m_large = 0;                  ///< factors applied exactly in the reference
  std::optional<double> epsilon;    ///< pseudo-inverse cutoff; defaults to 0.1 with a
                                    ///< reference active, 0 otherwise
  int max_iterations = 50;
  double angle_tol = 1e-6;          ///< convergence threshold on max |theta_min| (large angles)
  double energy_tol = 1e-9;         ///< convergence threshold on |delta E|
  bool screen_by_gradient = false;  ///< rank the pool by |b_k| from an initial
                                    ///< quadratic pass instead of MP2 amplitudes

  double resolved_epsilon() const { return epsilon.value_or(m_large > 0 ? 0.1 : 0.0); }
};

struct QuccResult {
  double e_hf = 0.0;
  double e0_corr = 0.0;  ///< exact-reference contribution <Psi0|H|Psi0> - E_HF
  double e_quad = 0.0;   ///< quadratic-expansion contribution b.theta + 1/2 theta^T A theta
  double e_total = 0.0;  ///< e_hf + e0_corr + e_quad
  int iterations = 0;
  bool converged = false;
  int pool_size = 0;
  std::vector<LargeFactor> large_angles;  ///< final angles, pool order
  std::vector<SolveReport> solves;        ///< one per iteration
};

/// Exact-reference correlation contribution <Psi|H|Psi> - E_HF for a factor
/// product applied to the Hartree-Fock determinant. A true expectation value,
/// so E_HF plus this value can never drop below the FCI ground energy.
inline double variational_reference_energy(const IntegralStore& st, const FactorSequence& seq) {
  const StateVector hf_state(reference_determinant(st));
  const StateVector psi = apply_sequence(seq, hf_state);
  return expectation_H(st, psi) - hf_energy(st);
}

/// Full solver driver: enumerate the singles/doubles pool, screen the
/// m_large largest factors, then iterate quadratic expansion about the exact
/// reference with the angle update theta' = theta + theta_min until the large
/// angles reach a fixed point. m_large = 0 reduces to one single-shot
/// quadratic expansion about Hartree-Fock.
inline QuccResult run_qucc(const IntegralStore& st, const QuccConfig& config = {}) {
  if (config.m_large < 0) throw std::invalid_argument("m_large must be non-negative");
  if (config.max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
  if (!(config.angle_tol > 0.0) || !(config.energy_tol > 0.0))
    throw std::invalid_argument("convergence tolerances must be positive");

  const std::vector<Excitation> pool = enumerate_singles_doubles(st);
  if (pool.empty()) throw std::invalid_argument("excitation pool is empty");
  const double epsilon = config.resolved_epsilon();

  QuccResult res;
  res.pool_size = static_cast<int>(pool.size());
  res.e_hf = hf_energy(st);
  if (!std::isfinite(res.e_hf))
    throw std::runtime_error("numerical failure: non-finite reference energy");

  std::vector<LargeFactor> large;
  if (config.m_large > 0) {
    std::vector<int> selected;
    const std::vector<double> amps = mp2_amplitudes(st, pool);
    if (config.screen_by_gradient) {
      const QuadraticModel probe = build_model_hf(st, pool);
      std::vector<double> score(pool.size());
      for (std::size_t k = 0; k < pool.size(); ++k) score[k] = probe.b(k);
      selected = select_large_factors(score, config.m_large);
    } else {
      selected = select_large_factors(amps, config.m_large);
    }
    // initial angles from the MP2 estimate; degenerate-flagged ones start at 0
    for (int k : selected) large.push_back({k, std::isfinite(amps[k]) ? amps[k] : 0.0});
  }

  double prev_total = 0.0;
  for (int it = 1; it <= config.max_iterations; ++it) {
    const QuadraticModel model = build_model_ucc_ref(st, pool, large);
    SolveReport rep = pseudo_inverse_solve(model.A, model.b, epsilon);

    res.e0_corr = model.e_ref - res.e_hf;
    res.e_quad = rep.e_quad;
    res.e_total = res.e_hf + res.e0_corr + res.e_quad;
    res.iterations = it;
    if (!std::isfinite(res.e_total))
      throw std::runtime_error("numerical failure: non-finite energy in iteration " +
                               std::to_string(it));

    double max_update = 0.0;
    for (auto& lf : large) {
      const double step = rep.theta_min(lf.pool_index);
      max_update = std::max(max_update, std::abs(step));
      lf.theta += step;
    }
    res.solves.push_back(std::move(rep));

    if (max_update < config.angle_tol) {
      res.converged = true;
      break;
    }
    if (it > 1 && std::abs(res.e_total - prev_total) < config.energy_tol) {
      res.converged = true;
      break;
    }
    prev_total = res.e_total;
  }
  res.large_angles = large;
  return res;
}

}  // namespace qucc
