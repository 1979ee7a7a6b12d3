#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "determinant.hpp"
#include "errors.hpp"
#include "integrals.hpp"
#include "slater_condon.hpp"
#include "state_vector.hpp"

namespace qucc {

namespace detail {

inline unsigned __int128 binomial128(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return r;
}

inline std::string u128_to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

// All n-bit masks with the given popcount, ascending numeric order.
inline std::vector<std::uint64_t> bit_combinations(int n, int k) {
  std::vector<std::uint64_t> out;
  const unsigned __int128 count = binomial128(n, k);
  out.reserve(static_cast<std::size_t>(count));
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  std::uint64_t v = low_bits(k);
  for (unsigned __int128 c = 0; c < count; ++c) {
    out.push_back(v);
    const std::uint64_t u = v & (~v + 1);
    const std::uint64_t w = v + u;
    v = w | (((v ^ w) / u) >> 2);
  }
  return out;
}

}  // namespace detail

/// The complete determinant basis with fixed (n_alpha, n_beta), ordered
/// lexicographically on the (alpha, beta) bitmask pair.
struct CiSpace {
  std::vector<Determinant> dets;
  std::map<Determinant, int> index;

  static CiSpace build(int n_spatial, int n_alpha, int n_beta) {
    CiSpace space;
    const auto alphas = detail::bit_combinations(n_spatial, n_alpha);
    const auto betas = detail::bit_combinations(n_spatial, n_beta);
    space.dets.reserve(alphas.size() * betas.size());
    for (const auto a : alphas)
      for (const auto b : betas) space.dets.push_back(Determinant{a, b});
    for (std::size_t i = 0; i < space.dets.size(); ++i)
      space.index[space.dets[i]] = static_cast<int>(i);
    return space;
  }

  std::size_t size() const { return dets.size(); }
};

struct FciOptions {
  std::size_t dimension_cap = 200000;
  int dense_threshold = 2000;   ///< dense diagonalization below, Davidson above
  double residual_tol = 1e-9;
  int max_iterations = 200;
  int max_subspace = 40;
};

struct FciResult {
  double energy = 0.0;
  StateVector ground;
  std::size_t dimension = 0;
  int iterations = 0;  ///< 0 for the dense path
};

namespace detail {

// Determinants reachable from d by a single or double excitation, by channel.
inline std::vector<Determinant> connected_determinants(const Determinant& d, int n_spatial) {
  std::vector<int> occ_a, vir_a, occ_b, vir_b;
  for (int p = 0; p < n_spatial; ++p) {
    const std::uint64_t bit = std::uint64_t{1} << p;
    ((d.alpha & bit) ? occ_a : vir_a).push_back(p);
    ((d.beta & bit) ? occ_b : vir_b).push_back(p);
  }
  std::vector<Determinant> out;
  auto moved = [](std::uint64_t mask, int i, int a) {
    return (mask & ~(std::uint64_t{1} << i)) | (std::uint64_t{1} << a);
  };
  for (int i : occ_a)
    for (int a : vir_a) out.push_back(Determinant{moved(d.alpha, i, a), d.beta});
  for (int i : occ_b)
    for (int a : vir_b) out.push_back(Determinant{d.alpha, moved(d.beta, i, a)});
  for (std::size_t ii = 0; ii < occ_a.size(); ++ii)
    for (std::size_t jj = ii + 1; jj < occ_a.size(); ++jj)
      for (std::size_t aa = 0; aa < vir_a.size(); ++aa)
        for (std::size_t bb = aa + 1; bb < vir_a.size(); ++bb)
          out.push_back(Determinant{
              moved(moved(d.alpha, occ_a[ii], vir_a[aa]), occ_a[jj], vir_a[bb]), d.beta});
  for (std::size_t ii = 0; ii < occ_b.size(); ++ii)
    for (std::size_t jj = ii + 1; jj < occ_b.size(); ++jj)
      for (std::size_t aa = 0; aa < vir_b.size(); ++aa)
        for (std::size_t bb = aa + 1; bb < vir_b.size(); ++bb)
          out.push_back(Determinant{
              d.alpha, moved(moved(d.beta, occ_b[ii], vir_b[aa]), occ_b[jj], vir_b[bb])});
  for (int i : occ_a)
    for (int a : vir_a)
      for (int j : occ_b)
        for (int b : vir_b)
          out.push_back(Determinant{moved(d.alpha, i, a), moved(d.beta, j, b)});
  return out;
}

class SparseHamiltonian {
 public:
  SparseHamiltonian(const IntegralStore& st, const CiSpace& space) {
    rows_.resize(space.size());
    for (std::size_t i = 0; i < space.size(); ++i) {
      const Determinant& di = space.dets[i];
      rows_[i].push_back({static_cast<int>(i), slater_condon(st, di, di)});
      for (const Determinant& dj : connected_determinants(di, st.n_spatial())) {
        const auto it = space.index.find(dj);
        if (it == space.index.end()) continue;
        if (it->second <= static_cast<int>(i)) continue;  // store strict upper triangle
        const double v = slater_condon(st, di, dj);
        if (v != 0.0) rows_[i].push_back({it->second, v});
      }
    }
  }

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (const auto& [j, v] : rows_[i]) {
        y(i) += v * x(j);
        if (j != static_cast<int>(i)) y(j) += v * x(i);
      }
    }
    return y;
  }

  double diagonal(std::size_t i) const { return rows_[i].front().second; }

 private:
  std::vector<std::vector<std::pair<int, double>>> rows_;
};

}  // namespace detail

/// Exact ground state over the full CI space: dense diagonalization below the
/// dense threshold, Davidson iteration (HF guess, diagonal preconditioner)
/// above. The eigenvector's sign is fixed by making its largest-magnitude
/// amplitude positive.
inline FciResult fci_ground(const IntegralStore& st, const FciOptions& opt = {}) {
  const unsigned __int128 dim128 =
      detail::binomial128(st.n_spatial(), st.n_alpha()) *
      detail::binomial128(st.n_spatial(), st.n_beta());
  if (dim128 > static_cast<unsigned __int128>(opt.dimension_cap))
    throw DimensionCapError(detail::u128_to_string(dim128), opt.dimension_cap);

  const CiSpace space = CiSpace::build(st.n_spatial(), st.n_alpha(), st.n_beta());
  const std::size_t dim = space.size();
  FciResult res;
  res.dimension = dim;

  Eigen::VectorXd ground(dim);
  if (dim <= static_cast<std::size_t>(opt.dense_threshold)) {
    Eigen::MatrixXd H(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i; j < dim; ++j) {
        const double v = slater_condon(st, space.dets[i], space.dets[j]);
        H(i, j) = H(j, i) = v;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense FCI eigensolve failed");
    res.energy = es.eigenvalues()(0);
    ground = es.eigenvectors().col(0);
  } else {
    const detail::SparseHamiltonian ham(st, space);
    const Determinant hf = reference_determinant(st);
    const int hf_index = space.index.at(hf);
    const int max_sub = std::min<std::size_t>(opt.max_subspace, dim);

    std::vector<Eigen::VectorXd> V, HV;
    Eigen::VectorXd v0 = Eigen::VectorXd::Zero(dim);
    v0(hf_index) = 1.0;
    V.push_back(v0);
    HV.push_back(ham.multiply(v0));

    double theta = 0.0;
    Eigen::VectorXd x, hx;
    bool converged = false;
    int iter = 0;
    for (; iter < opt.max_iterations && !converged; ++iter) {
      const int m = static_cast<int>(V.size());
      Eigen::MatrixXd G(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) G(a, b) = G(b, a) = V[a].dot(HV[b]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
      if (es.info() != Eigen::Success) throw std::runtime_error("Davidson subspace solve failed");
      theta = es.eigenvalues()(0);
      const Eigen::VectorXd y = es.eigenvectors().col(0);
      x = Eigen::VectorXd::Zero(dim);
      hx = Eigen::VectorXd::Zero(dim);
      for (int a = 0; a < m; ++a) {
        x += y(a) * V[a];
        hx += y(a) * HV[a];
      }
      const Eigen::VectorXd r = hx - theta * x;
      if (r.norm() < opt.residual_tol) {
        converged = true;
        break;
      }
      if (m >= max_sub) {  // collapse to the current Ritz vector
        V.assign(1, x);
        HV.assign(1, hx);
      }
      Eigen::VectorXd t(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        double denom = theta - ham.diagonal(i);
        if (std::abs(denom) < 1e-8) denom = denom < 0 ? -1e-8 : 1e-8;
        t(i) = r(i) / denom;
      }
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& v : V) t -= v.dot(t) * v;
      const double tn = t.norm();
      if (tn < 1e-12) throw std::runtime_error("Davidson stagnated");
      t /= tn;
      V.push_back(t);
      HV.push_back(ham.multiply(t));
    }
    if (!converged) throw std::runtime_error("Davidson failed to converge");
    res.energy = theta;
    res.iterations = iter + 1;
    ground = x / x.norm();
  }

  int imax = 0;
  for (std::size_t i = 1; i < dim; ++i)
    if (std::abs(ground(i)) > std::abs(ground(imax))) imax = static_cast<int>(i);
  if (ground(imax) < 0) ground = -ground;

  for (std::size_t i = 0; i < dim; ++i) res.ground.add(space.dets[i], ground(i));
  res.ground.compact();
  return res;
}

}  // namespace qucc
