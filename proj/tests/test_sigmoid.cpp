#include <gtest/gtest.h>

#include <cmath>

#include "signet/sigmoid.hpp"

namespace {

using namespace signet;

TEST(Sigmoid, ValuesAndSymmetry) {
  EXPECT_DOUBLE_EQ((double)sigmoid<ld>(0.0L), 0.5);
  EXPECT_NEAR((double)sigmoid<ld>(1.0L), 1.0 / (1.0 + std::exp(-1.0)), 1e-18);
  for (ld x : {-7.0L, -2.5L, -0.3L, 0.1L, 1.7L, 6.0L})
    EXPECT_NEAR((double)(sigmoid<ld>(-x) + sigmoid<ld>(x)), 1.0, 1e-18);
  EXPECT_LT((double)sigmoid<ld>(-40.0L), 1e-17);
  EXPECT_LT((double)(1.0L - sigmoid<ld>(40.0L)), 1e-17);
}

TEST(Sigmoid, BigFloatMatchesLongDouble) {
  set_big_float_bits(256);
  for (ld x : {-9.0L, -1.0L, 0.0L, 0.5L, 3.0L, 11.0L}) {
    const big_float v = sigmoid<big_float>(big_float(x));
    EXPECT_NEAR((double)(to_ld(v) - sigmoid<ld>(x)), 0.0, 1e-18);
  }
}

// Each closed-form derivative must match a central finite difference of the
// one below it.
TEST(Sigmoid, DerivativeLadder) {
  const ld h = 1e-6L;
  for (ld x : {-3.0L, -1.3L, -0.4L, 0.0L, 0.9L, 2.2L}) {
    for (int k = 1; k <= 4; ++k) {
      const ld fd =
          (sigmoid_deriv(k - 1, x + h) - sigmoid_deriv(k - 1, x - h)) / (2 * h);
      EXPECT_NEAR((double)sigmoid_deriv(k, x), (double)fd, 1e-9)
          << "order " << k << " at x=" << (double)x;
    }
  }
  EXPECT_THROW(sigmoid_deriv(5, 0.0L), std::invalid_argument);
}

TEST(Sigmoid, DerivativeNorms) {
  const SigmoidNorms& n = sigmoid_norms();
  EXPECT_NEAR((double)n.d1_max, 0.25, 1e-9);            // at x = 0
  EXPECT_NEAR((double)n.d2_max, 0.09622504486493764, 1e-9);
  EXPECT_NEAR((double)n.d3_max, 0.125, 1e-9);           // at x = 0
  EXPECT_GT((double)n.d4_max, (double)n.d2_max);
  // Scanned maxima can only undershoot the true sup, never exceed simple
  // global bounds from the s-parameterization on (0,1).
  EXPECT_LE((double)n.d2_max, 0.25);
  EXPECT_LE((double)n.d3_max, 0.25);
}

TEST(Sigmoid, Anchors) {
  const AnchorPoints an = default_anchors();
  EXPECT_EQ((double)an.t_id, 0.0);
  EXPECT_EQ((double)an.t_mult, (double)t_mult_anchor());

  // The product anchor targets the curvature maximum and is snapped to the
  // 2^-60 grid so repeated bias arithmetic stays bitwise consistent.
  const ld t = t_mult_anchor();
  const ld curvature_peak = -std::log(2.0L + std::sqrt(3.0L));
  EXPECT_LT(std::fabs((double)(t - curvature_peak)), 1e-17);
  const ld grid = std::pow(0.5L, 60.0L);
  const ld snapped = std::round(t / grid) * grid;
  EXPECT_EQ((double)(t - snapped), 0.0);
  EXPECT_NEAR((double)sigma_d2_at_t_mult(), (double)sigmoid_norms().d2_max, 1e-9);
}

}  // namespace
