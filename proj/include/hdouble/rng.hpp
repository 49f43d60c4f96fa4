#pragma once

#include <random>
#include <vector>

#include "hdouble/realization.hpp"

namespace hdouble {

/// Seeded sampling of algebra and group elements. All randomness in the
/// project flows through this so that runs are reproducible bit for bit.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(eng_);
  }

  uint64_t raw() { return eng_(); }

  std::vector<double> coeffs(int n, double amp) {
    std::vector<double> c(n);
    for (auto& x : c) x = uniform(-amp, amp);
    return c;
  }

  /// random real combination of the given algebra basis
  template <class B>
  GVal<B> alg(const Realization& R, const std::vector<GVal<B>>& basis, double amp = 1.0) {
    GVal<B> x = zero_alg<B>(R);
    for (const auto& e : basis) x = x + scal<B>(uniform(-amp, amp)) * e;
    return x;
  }

  /// random group element: exp of a random algebra element
  template <class B>
  GVal<B> group(const Realization& R, const std::vector<GVal<B>>& basis, double amp = 1.0) {
    return exp_alg(R, alg(R, basis, amp));
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace hdouble
