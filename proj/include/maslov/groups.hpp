#pragma once

// Coefficient groups for Cech cocycles. Z is additive; Z_k is the
// multiplicative group of k-th roots of unity; U(1) is the unit circle.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "maslov/errors.hpp"

namespace maslov {

namespace tolerance {
/// Distance to the nearest root of unity accepted when snapping.
inline constexpr double root_snap = 1e-6;
}  // namespace tolerance

/// exp(2 pi i * exponent / K), stored exactly by its exponent mod K.
template <int K>
struct RootOfUnity {
  static_assert(K > 0);
  int exponent = 0;

  constexpr RootOfUnity() = default;
  constexpr explicit RootOfUnity(int e) : exponent(((e % K) + K) % K) {}

  std::complex<double> to_complex() const {
    // Exact values for the quarter turns keep Z2/Z4 output free of 1e-17 noise.
    if ((4 * exponent) % K == 0) {
      static constexpr std::complex<double> quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      return quarter[(4 * exponent / K) % 4];
    }
    const double a = 2.0 * std::numbers::pi * exponent / K;
    return {std::cos(a), std::sin(a)};
  }

  constexpr RootOfUnity operator*(RootOfUnity o) const { return RootOfUnity(exponent + o.exponent); }
  constexpr RootOfUnity inverse() const { return RootOfUnity(-exponent); }
  constexpr RootOfUnity pow(long k) const { return RootOfUnity(static_cast<int>((exponent * (k % K)) % K)); }
  constexpr bool operator==(const RootOfUnity&) const = default;

  /// Nearest K-th root of unity to z; throws if farther than `tol`.
  static RootOfUnity snap(std::complex<double> z, double tol = tolerance::root_snap) {
    const double turns = std::arg(z) / (2.0 * std::numbers::pi) * K;
    const RootOfUnity r(static_cast<int>(std::lround(turns)));
    const double dist = std::abs(z - r.to_complex());
    if (!(dist <= tol))
      throw IntegralityError("value (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                             ") is not a " + std::to_string(K) + "-th root of unity");
    return r;
  }
};

/// Renders Z4 elements as 1, i, -1, -i.
inline std::string to_string(RootOfUnity<4> r) {
  static constexpr const char* names[4] = {"1", "i", "-1", "-i"};
  return names[r.exponent];
}
inline std::string to_string(RootOfUnity<2> r) { return r.exponent == 0 ? "1" : "-1"; }

struct IntegerGroup {
  using value_type = long;
  static constexpr const char* name = "Z";
  static value_type identity() { return 0; }
  static value_type combine(value_type a, value_type b) { return a + b; }
  static value_type inverse(value_type a) { return -a; }
};

template <int K>
struct CyclicGroup {
  using value_type = RootOfUnity<K>;
  static constexpr const char* name = K == 2 ? "Z2" : (K == 4 ? "Z4" : "Zk");
  static value_type identity() { return value_type{}; }
  static value_type combine(value_type a, value_type b) { return a * b; }
  static value_type inverse(value_type a) { return a.inverse(); }
};

using Z2 = CyclicGroup<2>;
using Z4 = CyclicGroup<4>;

struct CircleGroup {
  using value_type = std::complex<double>;
  static constexpr const char* name = "U(1)";
  static value_type identity() { return {1.0, 0.0}; }
  static value_type combine(value_type a, value_type b) { return a * b; }
  static value_type inverse(value_type a) { return 1.0 / a; }
};

}  // namespace maslov
