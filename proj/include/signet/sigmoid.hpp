#pragma once
// The sigmoid activation, its derivatives, scanned derivative norms, and the
// anchor points used by the primitive constructions.

#include <cmath>
#include <mutex>

#include "signet/scalar.hpp"

namespace signet {

// sigma(x) = 1 / (1 + exp(-x)).  Saturates cleanly for huge |x| (exp overflow
// gives +inf, so the quotient is exactly 0; exp underflow gives exactly 1).
template <class T>
T sigmoid(const T& x) {
  using std::exp;
  return T(1) / (T(1) + exp(-x));
}

// Derivatives expressed through s = sigma(x).
inline ld sigmoid_d1_from_s(ld s) { return s * (1 - s); }
inline ld sigmoid_d2_from_s(ld s) { return s * (1 - s) * (1 - 2 * s); }
inline ld sigmoid_d3_from_s(ld s) { return s * (1 - s) * (1 - 6 * s + 6 * s * s); }
inline ld sigmoid_d4_from_s(ld s) {
  return s * (1 - s) * (1 - 2 * s) * (1 - 12 * s + 12 * s * s);
}

inline ld sigmoid_deriv(int order, ld x) {
  const ld s = sigmoid<ld>(x);
  switch (order) {
    case 0: return s;
    case 1: return sigmoid_d1_from_s(s);
    case 2: return sigmoid_d2_from_s(s);
    case 3: return sigmoid_d3_from_s(s);
    case 4: return sigmoid_d4_from_s(s);
    default: throw std::invalid_argument("sigmoid_deriv: order out of range");
  }
}

// Sup norms of the sigmoid derivatives, found once by a dense scan of
// [-10, 10] with 1e6 points (all derivatives decay exponentially outside).
struct SigmoidNorms {
  ld d1_max = 0, d2_max = 0, d3_max = 0, d4_max = 0;
};

inline const SigmoidNorms& sigmoid_norms() {
  static SigmoidNorms norms;
  static std::once_flag flag;
  std::call_once(flag, [] {
    const int n = 1000000;
    for (int i = 0; i <= n; ++i) {
      const ld x = -10.0L + 20.0L * i / n;
      const ld s = sigmoid<ld>(x);
      norms.d1_max = std::max(norms.d1_max, std::fabs(sigmoid_d1_from_s(s)));
      norms.d2_max = std::max(norms.d2_max, std::fabs(sigmoid_d2_from_s(s)));
      norms.d3_max = std::max(norms.d3_max, std::fabs(sigmoid_d3_from_s(s)));
      norms.d4_max = std::max(norms.d4_max, std::fabs(sigmoid_d4_from_s(s)));
    }
  });
  return norms;
}

// Anchor points: t_id for the identity unit (sigma'(0) = 1/4 is the maximum of
// sigma', giving the smallest error constant), t_mult for the symmetric
// second-difference squaring (the maximizer of |sigma''|, where
// sigma(t) = (3 - sqrt(3))/6), and t_relu_gate for the smooth gate.
struct AnchorPoints {
  ld t_id = 0.0L;
  ld t_mult = 0.0L;
  ld t_relu_gate = 0.0L;
};

// The anchor is snapped to the grid 2^-60 so that composition-time bias
// arithmetic which shifts it by small integer multiples of powers of two
// (the scale-matched affine folds) stays exactly representable; the nearby
// grid point is an equally valid anchor analytically.
inline ld t_mult_anchor() {
  static const ld t = std::ldexp(
      std::nearbyint(
          std::ldexp(std::log((3.0L - std::sqrt(3.0L)) / (3.0L + std::sqrt(3.0L))), 60)),
      -60);
  return t;
}

inline AnchorPoints default_anchors() {
  return AnchorPoints{0.0L, t_mult_anchor(), 0.0L};
}

// |sigma''| at the squaring anchor: equals 1/(6*sqrt(3)), the sup of |sigma''|.
inline ld sigma_d2_at_t_mult() { return sigmoid_deriv(2, t_mult_anchor()); }

}  // namespace signet
