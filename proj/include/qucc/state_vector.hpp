#pragma once

#include <cmath>
#include <cstddef>
#include <map>

#include "determinant.hpp"

namespace qucc {

/// Sparse real wavefunction: map from Determinant to amplitude. The ordered
/// container makes every reduction over the state deterministic.
class StateVector {
 public:
  using Map = std::map<Determinant, double>;
  static constexpr double default_drop_tol = 1e-14;

  StateVector() = default;
  explicit StateVector(const Determinant& d, double amp = 1.0) { amps_[d] = amp; }

  void add(const Determinant& d, double c) {
    if (c == 0.0) return;
    amps_[d] += c;
  }

  double amplitude(const Determinant& d) const {
    auto it = amps_.find(d);
    return it == amps_.end() ? 0.0 : it->second;
  }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& [d, a] : amps_) s += a * a;
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }

  double dot(const StateVector& o) const {
    double s = 0.0;
    auto a = amps_.begin();
    auto b = o.amps_.begin();
    while (a != amps_.end() && b != o.amps_.end()) {
      if (a->first < b->first) {
        ++a;
      } else if (b->first < a->first) {
        ++b;
      } else {
        s += a->second * b->second;
        ++a;
        ++b;
      }
    }
    return s;
  }

  void scale(double f) {
    for (auto& [d, a] : amps_) a *= f;
  }

  /// Drops amplitudes below the tolerance in magnitude.
  void compact(double drop_tol = default_drop_tol) {
    for (auto it = amps_.begin(); it != amps_.end();) {
      if (std::abs(it->second) < drop_tol) {
        it = amps_.erase(it);
      } else {
        ++it;
      }
    }
  }

  std::size_t size() const { return amps_.size(); }
  bool empty() const { return amps_.empty(); }

  const Map& amplitudes() const { return amps_; }
  Map::const_iterator begin() const { return amps_.begin(); }
  Map::const_iterator end() const { return amps_.end(); }

 private:
  Map amps_;
};

}  // namespace qucc
