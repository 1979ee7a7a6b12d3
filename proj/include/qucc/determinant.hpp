#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>

namespace qucc {

// Interleaved spin-orbital convention used throughout: spin orbital 2p is the
// alpha component of spatial orbital p, 2p+1 the beta component. All fermionic
// phases are counted in this global order.
constexpr int spin_orbital(int spatial, bool beta) { return 2 * spatial + (beta ? 1 : 0); }
constexpr int spatial_index(int so) { return so >> 1; }
constexpr bool is_beta(int so) { return (so & 1) != 0; }

constexpr std::uint64_t low_bits(int n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

/// Slater determinant as occupation bitmasks over spatial orbitals, one word
/// per spin channel (bit p set <=> spatial orbital p occupied with that spin).
struct Determinant {
  std::uint64_t alpha = 0;
  std::uint64_t beta = 0;

  friend auto operator<=>(const Determinant&, const Determinant&) = default;

  bool occupied(int so) const {
    const std::uint64_t bit = std::uint64_t{1} << spatial_index(so);
    return ((is_beta(so) ? beta : alpha) & bit) != 0;
  }
  void set(int so) { (is_beta(so) ? beta : alpha) |= std::uint64_t{1} << spatial_index(so); }
  void clear(int so) { (is_beta(so) ? beta : alpha) &= ~(std::uint64_t{1} << spatial_index(so)); }

  int n_alpha() const { return std::popcount(alpha); }
  int n_beta() const { return std::popcount(beta); }
  int n_electrons() const { return n_alpha() + n_beta(); }

  /// Occupied spin orbitals strictly below `so` in interleaved order.
  int count_below(int so) const {
    const int p = spatial_index(so);
    const std::uint64_t below = low_bits(p);
    int c = std::popcount(alpha & below) + std::popcount(beta & below);
    if (is_beta(so)) c += static_cast<int>((alpha >> p) & 1);
    return c;
  }

  /// Excitation degree: half the number of differing occupied spin orbitals.
  int degree_to(const Determinant& o) const {
    return (std::popcount(alpha ^ o.alpha) + std::popcount(beta ^ o.beta)) / 2;
  }
};

struct SignedDeterminant {
  Determinant det;
  int sign = 1;
};

/// Aufbau reference: the lowest n_alpha/n_beta spatial orbitals filled.
inline Determinant reference_determinant(int n_alpha, int n_beta) {
  return Determinant{low_bits(n_alpha), low_bits(n_beta)};
}

// Applies the normal-ordered string a+_{c1} a+_{c2} ... a_{a_n} ... a_{a_1}
// (both index lists sorted ascending, duplicate-free) to a determinant.
// Reading the string right to left, annihilations act first in ascending index
// order, then creations in descending order; every elementary operator at spin
// orbital s contributes the phase (-1)^(occupied spin orbitals below s at the
// time it acts). Returns nullopt when the string annihilates the state, i.e.
// an annihilation hits an empty orbital or a creation a filled one.
inline std::optional<SignedDeterminant> apply_spin_orbital_ops(
    Determinant det, std::span<const int> creations, std::span<const int> annihilations) {
  int sign = 1;
  for (int so : annihilations) {
    if (!det.occupied(so)) return std::nullopt;
    if (det.count_below(so) & 1) sign = -sign;
    det.clear(so);
  }
  for (auto it = creations.rbegin(); it != creations.rend(); ++it) {
    if (det.occupied(*it)) return std::nullopt;
    if (det.count_below(*it) & 1) sign = -sign;
    det.set(*it);
  }
  return SignedDeterminant{det, sign};
}

}  // namespace qucc
