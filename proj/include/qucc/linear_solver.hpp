#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qucc {

/// Result of one regularized solve of A theta = -b.
struct SolveReport {
  Eigen::VectorXd theta_min;
  double e_quad = 0.0;          ///< b.theta + 1/2 theta^T A theta at theta_min
  int n_discarded = 0;          ///< eigenvalues zeroed by the cutoff
  std::vector<double> eigenvalues;  ///< full spectrum, ascending
  std::vector<bool> discarded;      ///< aligned with eigenvalues
};

inline double quadratic_energy(const Eigen::VectorXd& b, const Eigen::MatrixXd& A,
                               const Eigen::VectorXd& theta) {
  if (A.rows() != A.cols() || b.size() != A.rows() || theta.size() != b.size())
    throw std::invalid_argument("quadratic_energy: dimension mismatch");
  return b.dot(theta) + 0.5 * theta.dot(A * theta);
}

/// Eigenvalue-cutoff pseudo-inverse solve: A = Q Lambda Q^T, eigenvalues with
/// |lambda| <= epsilon are zeroed and excluded from the inversion, and
/// theta = -Q Lambda'^{-1} Q^T b. Epsilon = 0 still guards numerically zero
/// eigenvalues with an absolute fall-back cutoff of 1e-10.
inline SolveReport pseudo_inverse_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                        double epsilon) {
  if (A.rows() != A.cols() || b.size() != A.rows())
    throw std::invalid_argument("pseudo_inverse_solve: dimension mismatch");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("pseudo_inverse_solve: epsilon must be >= 0");
  if (A.size() > 0 && (A - A.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("pseudo_inverse_solve: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("pseudo_inverse_solve: eigendecomposition failed");

  const double cutoff = std::max(epsilon, 1e-10);
  const int n = static_cast<int>(A.rows());
  SolveReport rep;
  rep.eigenvalues.resize(n);
  rep.discarded.resize(n);
  rep.theta_min = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    const double lam = es.eigenvalues()(i);
    rep.eigenvalues[i] = lam;
    const bool drop = std::abs(lam) <= cutoff;
    rep.discarded[i] = drop;
    if (drop) {
      ++rep.n_discarded;
      continue;
    }
    const Eigen::VectorXd q = es.eigenvectors().col(i);
    rep.theta_min -= q * (q.dot(b) / lam);
  }
  rep.e_quad = quadratic_energy(b, A, rep.theta_min);
  return rep;
}

}  // namespace qucc
