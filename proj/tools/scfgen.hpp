#pragma once

// Minimal STO-3G integral generation (McMurchie-Davidson scheme over s and p
// Gaussians) plus a closed-shell RHF solver with DIIS. This exists to produce
// FCIDUMP fixtures and independent reference SCF energies; the solver library
// itself never touches geometries or AO integrals.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <qucc/integrals.hpp>

namespace scfgen {

constexpr double kAngstromToBohr = 1.8897259886;

struct Atom {
  int Z = 1;
  std::array<double, 3> r{0.0, 0.0, 0.0};
};

struct Primitive {
  double exponent = 0.0;
  double coef = 0.0;  // includes the primitive normalization factor
};

struct BasisFunction {
  std::array<int, 3> l{0, 0, 0};  // cartesian powers
  std::array<double, 3> center{0.0, 0.0, 0.0};
  std::vector<Primitive> prims;
};

namespace detail {

inline double double_factorial(int n) {
  double r = 1.0;
  for (; n > 1; n -= 2) r *= n;
  return r;
}

inline double primitive_norm(double a, int lx, int ly, int lz) {
  const int L = lx + ly + lz;
  const double pref = std::pow(2.0 * a / std::numbers::pi, 0.75);
  return pref * std::pow(4.0 * a, 0.5 * L) /
         std::sqrt(double_factorial(2 * lx - 1) * double_factorial(2 * ly - 1) *
                   double_factorial(2 * lz - 1));
}

// Boys function F_0..F_mmax at T, downward recursion from a confluent
// hypergeometric series (asymptotic form for large T).
inline std::vector<double> boys(int mmax, double T) {
  std::vector<double> F(mmax + 1, 0.0);
  if (T < 1e-14) {
    for (int m = 0; m <= mmax; ++m) F[m] = 1.0 / (2 * m + 1);
    return F;
  }
  if (T > 35.0) {
    F[0] = 0.5 * std::sqrt(std::numbers::pi / T);
    const double expT = std::exp(-T);
    for (int m = 0; m < mmax; ++m) F[m + 1] = ((2 * m + 1) * F[m] - expT) / (2.0 * T);
    return F;
  }
  // F_m(T) = exp(-T)/(2m+1) * sum_k T^k / prod_{i=1..k} (m + 1/2 + i)
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= T / (mmax + 0.5 + k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  F[mmax] = std::exp(-T) / (2 * mmax + 1) * sum;
  for (int m = mmax; m > 0; --m) F[m - 1] = (2.0 * T * F[m] + std::exp(-T)) / (2 * m - 1);
  return F;
}

// Hermite expansion coefficient E_t^{ij} for a primitive pair along one axis.
inline double hermite_E(int i, int j, int t, double Q, double a, double b) {
  if (t < 0 || t > i + j) return 0.0;
  const double p = a + b;
  const double q = a * b / p;
  if (i == 0 && j == 0) return std::exp(-q * Q * Q);
  if (i > 0)
    return 0.5 / p * hermite_E(i - 1, j, t - 1, Q, a, b) -
           q * Q / a * hermite_E(i - 1, j, t, Q, a, b) +
           (t + 1) * hermite_E(i - 1, j, t + 1, Q, a, b);
  return 0.5 / p * hermite_E(i, j - 1, t - 1, Q, a, b) +
         q * Q / b * hermite_E(i, j - 1, t, Q, a, b) +
         (t + 1) * hermite_E(i, j - 1, t + 1, Q, a, b);
}

// Hermite Coulomb integral R^0_{tuv} via auxiliary order recursion.
inline double hermite_R(int t, int u, int v, int n, double p, double dx, double dy, double dz,
                        const std::vector<double>& F) {
  if (t < 0 || u < 0 || v < 0) return 0.0;
  if (t == 0 && u == 0 && v == 0) return std::pow(-2.0 * p, n) * F[n];
  if (t > 0)
    return (t - 1) * hermite_R(t - 2, u, v, n + 1, p, dx, dy, dz, F) +
           dx * hermite_R(t - 1, u, v, n + 1, p, dx, dy, dz, F);
  if (u > 0)
    return (u - 1) * hermite_R(t, u - 2, v, n + 1, p, dx, dy, dz, F) +
           dy * hermite_R(t, u - 1, v, n + 1, p, dx, dy, dz, F);
  return (v - 1) * hermite_R(t, u, v - 2, n + 1, p, dx, dy, dz, F) +
         dz * hermite_R(t, u, v - 1, n + 1, p, dx, dy, dz, F);
}

inline double overlap_1d(int i, int j, double Q, double a, double b) {
  return hermite_E(i, j, 0, Q, a, b) * std::sqrt(std::numbers::pi / (a + b));
}

inline double kinetic_prim(const std::array<int, 3>& la, const std::array<int, 3>& lb, double a,
                           double b, const std::array<double, 3>& A,
                           const std::array<double, 3>& B) {
  std::array<double, 3> s{}, k{};
  for (int d = 0; d < 3; ++d) {
    const double Q = A[d] - B[d];
    const int i = la[d], j = lb[d];
    s[d] = overlap_1d(i, j, Q, a, b);
    k[d] = -2.0 * b * b * overlap_1d(i, j + 2, Q, a, b) +
           b * (2 * j + 1) * overlap_1d(i, j, Q, a, b);
    if (j >= 2) k[d] -= 0.5 * j * (j - 1) * overlap_1d(i, j - 2, Q, a, b);
  }
  return k[0] * s[1] * s[2] + s[0] * k[1] * s[2] + s[0] * s[1] * k[2];
}

}  // namespace detail

inline double overlap(const BasisFunction& f1, const BasisFunction& f2) {
  double s = 0.0;
  for (const auto& p1 : f1.prims)
    for (const auto& p2 : f2.prims) {
      double v = p1.coef * p2.coef;
      for (int d = 0; d < 3; ++d)
        v *= detail::overlap_1d(f1.l[d], f2.l[d], f1.center[d] - f2.center[d], p1.exponent,
                                p2.exponent);
      s += v;
    }
  return s;
}

inline double kinetic(const BasisFunction& f1, const BasisFunction& f2) {
  double s = 0.0;
  for (const auto& p1 : f1.prims)
    for (const auto& p2 : f2.prims)
      s += p1.coef * p2.coef *
           detail::kinetic_prim(f1.l, f2.l, p1.exponent, p2.exponent, f1.center, f2.center);
  return s;
}

inline double nuclear(const BasisFunction& f1, const BasisFunction& f2,
                      const std::vector<Atom>& atoms) {
  double total = 0.0;
  const int lmax = f1.l[0] + f1.l[1] + f1.l[2] + f2.l[0] + f2.l[1] + f2.l[2];
  for (const auto& p1 : f1.prims) {
    for (const auto& p2 : f2.prims) {
      const double a = p1.exponent, b = p2.exponent;
      const double p = a + b;
      std::array<double, 3> P{};
      for (int d = 0; d < 3; ++d) P[d] = (a * f1.center[d] + b * f2.center[d]) / p;
      for (const auto& atom : atoms) {
        const double dx = P[0] - atom.r[0], dy = P[1] - atom.r[1], dz = P[2] - atom.r[2];
        const double T = p * (dx * dx + dy * dy + dz * dz);
        const auto F = detail::boys(lmax, T);
        double v = 0.0;
        for (int t = 0; t <= f1.l[0] + f2.l[0]; ++t)
          for (int u = 0; u <= f1.l[1] + f2.l[1]; ++u)
            for (int w = 0; w <= f1.l[2] + f2.l[2]; ++w)
              v += detail::hermite_E(f1.l[0], f2.l[0], t, f1.center[0] - f2.center[0], a, b) *
                   detail::hermite_E(f1.l[1], f2.l[1], u, f1.center[1] - f2.center[1], a, b) *
                   detail::hermite_E(f1.l[2], f2.l[2], w, f1.center[2] - f2.center[2], a, b) *
                   detail::hermite_R(t, u, w, 0, p, dx, dy, dz, F);
        total += -atom.Z * p1.coef * p2.coef * 2.0 * std::numbers::pi / p * v;
      }
    }
  }
  return total;
}

/// Two-electron repulsion integral (f1 f2 | f3 f4) in chemist notation.
inline double eri(const BasisFunction& f1, const BasisFunction& f2, const BasisFunction& f3,
                  const BasisFunction& f4) {
  const int lmax = f1.l[0] + f1.l[1] + f1.l[2] + f2.l[0] + f2.l[1] + f2.l[2] + f3.l[0] +
                   f3.l[1] + f3.l[2] + f4.l[0] + f4.l[1] + f4.l[2];
  double total = 0.0;
  for (const auto& p1 : f1.prims)
    for (const auto& p2 : f2.prims) {
      const double a = p1.exponent, b = p2.exponent;
      const double p = a + b;
      std::array<double, 3> P{};
      for (int d = 0; d < 3; ++d) P[d] = (a * f1.center[d] + b * f2.center[d]) / p;
      // bra-side Hermite coefficients
      std::array<std::array<double, 5>, 3> Eb{};
      for (int d = 0; d < 3; ++d)
        for (int t = 0; t <= f1.l[d] + f2.l[d]; ++t)
          Eb[d][t] = detail::hermite_E(f1.l[d], f2.l[d], t, f1.center[d] - f2.center[d], a, b);
      for (const auto& p3 : f3.prims)
        for (const auto& p4 : f4.prims) {
          const double c = p3.exponent, e = p4.exponent;
          const double q = c + e;
          std::array<double, 3> Q{};
          for (int d = 0; d < 3; ++d) Q[d] = (c * f3.center[d] + e * f4.center[d]) / q;
          std::array<std::array<double, 5>, 3> Ek{};
          for (int d = 0; d < 3; ++d)
            for (int t = 0; t <= f3.l[d] + f4.l[d]; ++t)
              Ek[d][t] =
                  detail::hermite_E(f3.l[d], f4.l[d], t, f3.center[d] - f4.center[d], c, e);
          const double alpha = p * q / (p + q);
          const double dx = P[0] - Q[0], dy = P[1] - Q[1], dz = P[2] - Q[2];
          const double T = alpha * (dx * dx + dy * dy + dz * dz);
          const auto F = detail::boys(lmax, T);
          double v = 0.0;
          for (int t = 0; t <= f1.l[0] + f2.l[0]; ++t)
            for (int u = 0; u <= f1.l[1] + f2.l[1]; ++u)
              for (int w = 0; w <= f1.l[2] + f2.l[2]; ++w) {
                if (Eb[0][t] * Eb[1][u] * Eb[2][w] == 0.0) continue;
                for (int tt = 0; tt <= f3.l[0] + f4.l[0]; ++tt)
                  for (int uu = 0; uu <= f3.l[1] + f4.l[1]; ++uu)
                    for (int ww = 0; ww <= f3.l[2] + f4.l[2]; ++ww) {
                      const double sign = ((tt + uu + ww) % 2 == 0) ? 1.0 : -1.0;
                      v += Eb[0][t] * Eb[1][u] * Eb[2][w] * Ek[0][tt] * Ek[1][uu] * Ek[2][ww] *
                           sign *
                           detail::hermite_R(t + tt, u + uu, w + ww, 0, alpha, dx, dy, dz, F);
                    }
              }
          total += p1.coef * p2.coef * p3.coef * p4.coef * 2.0 *
                   std::pow(std::numbers::pi, 2.5) / (p * q * std::sqrt(p + q)) * v;
        }
    }
  return total;
}

/// STO-3G basis for H and O atoms (Hehre-Stewart-Pople exponents/coefficients).
inline std::vector<BasisFunction> sto3g_basis(const std::vector<Atom>& atoms) {
  auto make = [](const std::array<double, 3>& center, std::array<int, 3> l,
                 std::initializer_list<std::pair<double, double>> prims) {
    BasisFunction f;
    f.l = l;
    f.center = center;
    for (const auto& [expo, c] : prims)
      f.prims.push_back({expo, c * detail::primitive_norm(expo, l[0], l[1], l[2])});
    return f;
  };

  std::vector<BasisFunction> basis;
  for (const auto& atom : atoms) {
    if (atom.Z == 1) {
      basis.push_back(make(atom.r, {0, 0, 0},
                           {{3.42525091, 0.15432897},
                            {0.62391373, 0.53532814},
                            {0.16885540, 0.44463454}}));
    } else if (atom.Z == 8) {
      basis.push_back(make(atom.r, {0, 0, 0},
                           {{130.7093200, 0.15432897},
                            {23.8088610, 0.53532814},
                            {6.4436083, 0.44463454}}));
      basis.push_back(make(atom.r, {0, 0, 0},
                           {{5.0331513, -0.09996723},
                            {1.1695961, 0.39951283},
                            {0.3803890, 0.70011547}}));
      for (int d = 0; d < 3; ++d) {
        std::array<int, 3> l{0, 0, 0};
        l[d] = 1;
        basis.push_back(make(atom.r, l,
                             {{5.0331513, 0.15591627},
                              {1.1695961, 0.60768372},
                              {0.3803890, 0.39195739}}));
      }
    } else {
      throw std::invalid_argument("sto3g_basis: only H and O are supported");
    }
  }
  // renormalize each contraction to unit self-overlap
  for (auto& f : basis) {
    const double s = overlap(f, f);
    const double scale = 1.0 / std::sqrt(s);
    for (auto& p : f.prims) p.coef *= scale;
  }
  return basis;
}

inline double nuclear_repulsion(const std::vector<Atom>& atoms) {
  double e = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      const double dx = atoms[i].r[0] - atoms[j].r[0];
      const double dy = atoms[i].r[1] - atoms[j].r[1];
      const double dz = atoms[i].r[2] - atoms[j].r[2];
      e += atoms[i].Z * atoms[j].Z / std::sqrt(dx * dx + dy * dy + dz * dz);
    }
  return e;
}

struct RhfResult {
  double e_total = 0.0;
  double e_nuc = 0.0;
  bool converged = false;
  int iterations = 0;
  int n_occ = 0;
  Eigen::VectorXd mo_energies;
  Eigen::MatrixXd coeffs;  // columns are MOs, energy-ascending
};

struct AoIntegrals {
  Eigen::MatrixXd S, T, V;
  std::vector<double> eri;  // full nbf^4 table
  int nbf = 0;

  double g(int m, int n, int l, int s) const {
    return eri[((static_cast<std::size_t>(m) * nbf + n) * nbf + l) * nbf + s];
  }
};

inline AoIntegrals compute_ao_integrals(const std::vector<Atom>& atoms,
                                        const std::vector<BasisFunction>& basis) {
  const int n = static_cast<int>(basis.size());
  AoIntegrals ao;
  ao.nbf = n;
  ao.S.resize(n, n);
  ao.T.resize(n, n);
  ao.V.resize(n, n);
  for (int m = 0; m < n; ++m)
    for (int v = m; v < n; ++v) {
      ao.S(m, v) = ao.S(v, m) = overlap(basis[m], basis[v]);
      ao.T(m, v) = ao.T(v, m) = kinetic(basis[m], basis[v]);
      ao.V(m, v) = ao.V(v, m) = nuclear(basis[m], basis[v], atoms);
    }
  ao.eri.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  auto at = [&](int m, int v, int l, int s) -> double& {
    return ao.eri[((static_cast<std::size_t>(m) * n + v) * n + l) * n + s];
  };
  for (int m = 0; m < n; ++m)
    for (int v = 0; v <= m; ++v)
      for (int l = 0; l <= m; ++l)
        for (int s = 0; s <= l; ++s) {
          if (l * (l + 1) / 2 + s > m * (m + 1) / 2 + v) continue;
          const double g = eri(basis[m], basis[v], basis[l], basis[s]);
          at(m, v, l, s) = at(v, m, l, s) = at(m, v, s, l) = at(v, m, s, l) = g;
          at(l, s, m, v) = at(s, l, m, v) = at(l, s, v, m) = at(s, l, v, m) = g;
        }
  return ao;
}

/// Closed-shell restricted Hartree-Fock with DIIS.
inline RhfResult rhf(const std::vector<Atom>& atoms, int charge = 0, int max_iter = 500,
                     double conv_err = 1e-10, double conv_e = 1e-12) {
  const auto basis = sto3g_basis(atoms);
  const auto ao = compute_ao_integrals(atoms, basis);
  const int n = ao.nbf;
  int nelec = -charge;
  for (const auto& a : atoms) nelec += a.Z;
  if (nelec <= 0 || nelec % 2 != 0)
    throw std::invalid_argument("rhf: needs an even, positive electron count");
  const int nocc = nelec / 2;
  if (nocc > n) throw std::invalid_argument("rhf: more electron pairs than basis functions");

  const Eigen::MatrixXd Hcore = ao.T + ao.V;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_s(ao.S);
  if (es_s.eigenvalues().minCoeff() < 1e-10)
    throw std::runtime_error("rhf: near-singular overlap matrix");
  const Eigen::MatrixXd X = es_s.eigenvectors() *
                            es_s.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                            es_s.eigenvectors().transpose();

  auto build_fock = [&](const Eigen::MatrixXd& P) {
    Eigen::MatrixXd F = Hcore;
    for (int m = 0; m < n; ++m)
      for (int v = 0; v < n; ++v) {
        double g = 0.0;
        for (int l = 0; l < n; ++l)
          for (int s = 0; s < n; ++s)
            g += P(l, s) * (ao.g(m, v, s, l) - 0.5 * ao.g(m, l, s, v));
        F(m, v) += g;
      }
    return F;
  };
  auto density = [&](const Eigen::MatrixXd& C) {
    return Eigen::MatrixXd(2.0 * C.leftCols(nocc) * C.leftCols(nocc).transpose());
  };
  auto diagonalize = [&](const Eigen::MatrixXd& F, Eigen::VectorXd& eps) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.transpose() * F * X);
    eps = es.eigenvalues();
    return Eigen::MatrixXd(X * es.eigenvectors());
  };

  RhfResult res;
  res.e_nuc = nuclear_repulsion(atoms);
  res.n_occ = nocc;

  Eigen::VectorXd eps;
  Eigen::MatrixXd C = diagonalize(Hcore, eps);
  Eigen::MatrixXd P = density(C);

  std::vector<Eigen::MatrixXd> diis_F, diis_E;
  double e_prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::MatrixXd F = build_fock(P);
    const double e_elec = 0.5 * (P.array() * (Hcore + F).array()).sum();
    const Eigen::MatrixXd err = X.transpose() * (F * P * ao.S - ao.S * P * F) * X;
    const double err_max = err.cwiseAbs().maxCoeff();

    res.iterations = it;
    if (it > 1 && err_max < conv_err && std::abs(e_elec - e_prev) < conv_e) {
      res.converged = true;
      C = diagonalize(F, eps);
      res.e_total = e_elec + res.e_nuc;
      res.mo_energies = eps;
      res.coeffs = C;
      return res;
    }
    e_prev = e_elec;

    diis_F.push_back(F);
    diis_E.push_back(err);
    if (diis_F.size() > 8) {
      diis_F.erase(diis_F.begin());
      diis_E.erase(diis_E.begin());
    }
    if (diis_F.size() >= 2) {
      const int m = static_cast<int>(diis_F.size());
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m + 1, m + 1);
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b)
          B(a, b) = (diis_E[a].array() * diis_E[b].array()).sum();
        B(a, m) = B(m, a) = -1.0;
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
      rhs(m) = -1.0;
      const Eigen::VectorXd c = B.fullPivLu().solve(rhs);
      if (c.allFinite()) {
        F.setZero();
        for (int a = 0; a < m; ++a) F += c(a) * diis_F[a];
      }
    }
    C = diagonalize(F, eps);
    P = density(C);
  }
  throw std::runtime_error("rhf: SCF failed to converge");
}

/// Transforms the AO integrals into the converged MO basis and packs them as
/// an IntegralStore (core energy = nuclear repulsion).
inline qucc::IntegralStore mo_integral_store(const std::vector<Atom>& atoms,
                                             const RhfResult& scf) {
  const auto basis = sto3g_basis(atoms);
  const auto ao = compute_ao_integrals(atoms, basis);
  const int n = ao.nbf;
  const Eigen::MatrixXd& C = scf.coeffs;
  const Eigen::MatrixXd h_mo = C.transpose() * (ao.T + ao.V) * C;

  auto idx = [n](int a, int b, int c, int d) {
    return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
  };
  std::vector<double> t1(ao.eri.size(), 0.0), t2(ao.eri.size(), 0.0);
  // four quarter transforms
  for (int p = 0; p < n; ++p)
    for (int v = 0; v < n; ++v)
      for (int l = 0; l < n; ++l)
        for (int s = 0; s < n; ++s) {
          double acc = 0.0;
          for (int m = 0; m < n; ++m) acc += C(m, p) * ao.eri[idx(m, v, l, s)];
          t1[idx(p, v, l, s)] = acc;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int l = 0; l < n; ++l)
        for (int s = 0; s < n; ++s) {
          double acc = 0.0;
          for (int v = 0; v < n; ++v) acc += C(v, q) * t1[idx(p, v, l, s)];
          t2[idx(p, q, l, s)] = acc;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) acc += C(l, r) * t2[idx(p, q, l, s)];
          t1[idx(p, q, r, s)] = acc;
        }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) acc += C(l, s) * t1[idx(p, q, r, l)];
          t2[idx(p, q, r, s)] = acc;
        }

  qucc::IntegralStore store(n, scf.n_occ, scf.n_occ, scf.e_nuc);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) store.set_h(p, q, 0.5 * (h_mo(p, q) + h_mo(q, p)));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= r; ++s) {
          if (r * (r + 1) / 2 + s > p * (p + 1) / 2 + q) continue;
          store.set_eri(p, q, r, s, t2[idx(p, q, r, s)]);
        }
  return store;
}

// ---- fixture geometries (coordinates in bohr) ----

inline std::vector<Atom> h2(double bond_bohr) {
  return {{1, {0.0, 0.0, 0.0}}, {1, {0.0, 0.0, bond_bohr}}};
}

inline std::vector<Atom> h_chain(int count, double spacing_bohr) {
  std::vector<Atom> atoms;
  for (int i = 0; i < count; ++i) atoms.push_back({1, {0.0, 0.0, i * spacing_bohr}});
  return atoms;
}

inline std::vector<Atom> water(double r_oh_angstrom = 0.9572, double hoh_deg = 104.52) {
  const double r = r_oh_angstrom * kAngstromToBohr;
  const double half = hoh_deg * std::numbers::pi / 180.0 / 2.0;
  return {{8, {0.0, 0.0, 0.0}},
          {1, {r * std::sin(half), 0.0, r * std::cos(half)}},
          {1, {-r * std::sin(half), 0.0, r * std::cos(half)}}};
}

}  // namespace scfgen
