#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "signet/blocks.hpp"
#include "signet/harness.hpp"

namespace {

using namespace signet;

bool is_pow2(ld v) {
  int e = 0;
  return v > 0.0L && std::frexp(v, &e) == 0.5L;
}

ld sup_vs(const Network& n, const std::function<ld(const std::vector<ld>&)>& target,
          ld lo, ld hi, int grid) {
  const TypedNet<ld> tn = make_typed<ld>(n);
  ld worst = 0.0L;
  std::vector<ld> x(n.input_dim);
  const long long total = [&] {
    long long t = 1;
    for (int j = 0; j < n.input_dim; ++j) t *= grid;
    return t;
  }();
  for (long long i = 0; i < total; ++i) {
    long long rest = i;
    for (int j = n.input_dim - 1; j >= 0; --j) {
      x[j] = lo + (hi - lo) * (rest % grid) / grid;
      rest /= grid;
    }
    worst = std::max(worst, std::fabs(forward(tn, x)[0] - target(x)));
  }
  return worst;
}

TEST(Blocks, IdentityWithinBound) {
  for (ld R : {1.0e2L, 1.0e3L, 1.0e4L}) {
    const Network n = identity_net(BlockAccuracy::with_R(R, 1.0L));
    EXPECT_TRUE(is_pow2(n.params.at("R")));
    const ld err =
        sup_vs(n, [](const std::vector<ld>& x) { return x[0]; }, -1.0L, 1.0L, 20000);
    EXPECT_LE((double)err, (double)bounds::identity(1.0L, R));
  }
}

TEST(Blocks, IdentityHitsRequestedTarget) {
  for (ld target : {1e-3L, 1e-5L}) {
    const Network n = identity_net(BlockAccuracy::with_target(target, 1.0L));
    const ld err =
        sup_vs(n, [](const std::vector<ld>& x) { return x[0]; }, -1.0L, 1.0L, 20000);
    EXPECT_LE((double)err, (double)target);
  }
}

TEST(Blocks, IdentityChainBoundAndDepth) {
  const ld R = 4096.0L;
  for (int steps : {1, 2, 4}) {
    const Network n = identity_chain(R, steps);
    EXPECT_EQ(n.depth(), steps);
    const ld err =
        sup_vs(n, [](const std::vector<ld>& x) { return x[0]; }, -1.0L, 1.0L, 20000);
    EXPECT_LE((double)err, (double)bounds::identity_chain(1.0L, steps, R));
  }
}

TEST(Blocks, ProductWithinBound) {
  for (ld R : {1.0e2L, 1.0e3L, 1.0e4L}) {
    const Network n = product_net(BlockAccuracy::with_R(R, 1.0L));
    EXPECT_EQ(n.input_dim, 2);
    EXPECT_TRUE(is_pow2(n.params.at("R")));
    const ld err = sup_vs(
        n, [](const std::vector<ld>& x) { return x[0] * x[1]; }, -1.0L, 1.0L, 150);
    EXPECT_LE((double)err, (double)bounds::product(1.0L, R));
  }
}

TEST(Blocks, ProductNearZeroWhenOneFactorIsZero) {
  // With one factor zero the four symmetric units collapse into two bitwise
  // pairs whose read-out coefficients cancel; only summation-order roundoff
  // of the read-out survives.
  const Network n = product_net(BlockAccuracy::with_R(1.0e3L, 1.0L));
  for (ld v : {-0.9L, -0.25L, 0.0L, 0.5L, 1.0L}) {
    EXPECT_NEAR((double)eval1(n, {0.0L, v}), 0.0, 1e-9);
    EXPECT_NEAR((double)eval1(n, {v, 0.0L}), 0.0, 1e-9);
  }
}

TEST(Blocks, ReluWithinBound) {
  for (ld R : {1.0e2L, 1.0e3L, 1.0e4L}) {
    const Network n = relu_net(BlockAccuracy::with_R(R, 1.0L));
    const ld err = sup_vs(
        n, [](const std::vector<ld>& x) { return std::max(x[0], 0.0L); }, -1.0L,
        1.0L, 20000);
    EXPECT_LE((double)err, (double)bounds::relu(1.0L, R));
  }
}

TEST(Blocks, MonomialValues) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  // x^2, x^3, x*y, x^2*y under one packing order (exponents per coordinate).
  struct Case {
    std::vector<int> e;
    int N;
  };
  for (const Case c : {Case{{2}, 2}, Case{{3}, 3}, Case{{1, 1}, 2}, Case{{2, 1}, 3}}) {
    const Network n = monomial_net(c.e, c.N, BlockAccuracy::with_target(1e-5L, 1.0L));
    ASSERT_EQ(n.input_dim, (int)c.e.size() + 1);  // coordinates plus channel y
    // Read-out weights scale like R^2; the planner switches to extended
    // precision where a plain 64-bit-mantissa pass would lose the result.
    const PlannedEvaluator ev(n);
    for (int t = 0; t < 300; ++t) {
      std::vector<ld> x(c.e.size() + 1);
      ld exact = 1.0L;
      for (size_t j = 0; j < c.e.size(); ++j) {
        x[j] = (ld)u(rng);
        exact *= std::pow(x[j], c.e[j]);
      }
      x.back() = (ld)u(rng);  // the multiplied channel value y
      exact *= x.back();
      EXPECT_NEAR((double)ev(x), (double)exact, 1e-5);
    }
  }
}

TEST(Blocks, PolynomialCombinesChannels) {
  // Inputs: coordinate + one channel slot per degree-<=N monomial; output is
  // sum_k r_k * y_k * x^k over the requested terms.
  const std::vector<std::pair<std::vector<int>, ld>> terms = {
      {{0}, 2.0L}, {{2}, -1.0L}};
  const Network n = polynomial_net(1, 2, terms, BlockAccuracy::with_target(1e-5L, 1.0L));
  EXPECT_EQ(n.depth(), (int)n.claimed_depth);
  EXPECT_LE(n.max_hidden_width(), n.claimed_width);
  const TypedNet<ld> tn = make_typed<ld>(n);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    std::vector<ld> x(n.input_dim, 0.0L);
    x[0] = (ld)u(rng);
    const ld y0 = (ld)u(rng), y2 = (ld)u(rng);
    x[1] = y0;
    x[2] = y2;
    const ld exact = 2.0L * y0 - 1.0L * y2 * x[0] * x[0];
    EXPECT_NEAR((double)forward(tn, x)[0], (double)exact, 2e-5);
  }
}

TEST(Blocks, IndicatorSeparates) {
  const ld eps = 1e-3L, delta = 0.05L;
  for (int d : {1, 2}) {
    const Network n =
        indicator_net(std::vector<ld>(d, -0.5L), std::vector<ld>(d, 0.5L), eps, delta);
    const TypedNet<ld> tn = make_typed<ld>(n);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> in(-0.5 + (double)delta,
                                              0.5 - (double)delta);
    std::uniform_real_distribution<double> any(-0.45, 0.45);
    for (int t = 0; t < 400; ++t) {
      std::vector<ld> x(d);
      for (int j = 0; j < d; ++j) x[j] = (ld)in(rng);
      const ld v = forward(tn, x)[0];
      EXPECT_NEAR((double)v, 1.0, (double)eps);
      // Push one coordinate just outside: must suppress, even in d=2 where a
      // single out-of-range coordinate has to defeat the in-range ones.
      for (int j = 0; j < d; ++j) {
        std::vector<ld> y(d);
        for (int m = 0; m < d; ++m) y[m] = (ld)any(rng);
        y[j] = (t % 2) ? 0.5L + delta : -0.5L - delta;
        EXPECT_LE((double)forward(tn, y)[0], (double)eps);
      }
    }
  }
}

TEST(Blocks, IndicatorStaysInUnitRange) {
  const Network n = indicator_net({-0.25L}, {0.25L}, 1e-2L, 0.02L);
  const TypedNet<ld> tn = make_typed<ld>(n);
  for (int g = 0; g <= 2000; ++g) {
    const ld x = -1.0L + g * 1e-3L;
    const ld v = forward(tn, {x})[0];
    EXPECT_GE((double)v, 0.0);
    EXPECT_LE((double)v, 1.0);
  }
}

TEST(Blocks, ConstantTestMatchesIndicatorShape) {
  const Network n = constant_test_net({-0.5L}, {0.5L}, 1e-2L, 0.05L);
  const TypedNet<ld> tn = make_typed<ld>(n);
  EXPECT_NEAR((double)forward(tn, {0.0L})[0], 1.0, 1e-2);
  EXPECT_NEAR((double)forward(tn, {0.8L})[0], 0.0, 1e-2);
}

TEST(Blocks, MovableWindowTracksItsCube) {
  // Inputs: d coordinates followed by the cube's low corner; the window must
  // accept points inside [corner, corner+side) with margin delta and reject
  // points delta outside, for corners it was never specialized to.
  const ld side = 0.5L, eps = 1e-2L, delta = 0.02L;
  for (int d : {1, 2}) {
    const Network n = movable_window_net(d, side, eps, delta);
    EXPECT_EQ(n.input_dim, 2 * d);
    const TypedNet<ld> tn = make_typed<ld>(n);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uc(-0.7, 0.2);
    std::uniform_real_distribution<double> uin((double)delta,
                                               (double)(side - delta));
    for (int t = 0; t < 200; ++t) {
      std::vector<ld> z(2 * d);
      for (int j = 0; j < d; ++j) {
        z[d + j] = (ld)uc(rng);               // corner
        z[j] = z[d + j] + (ld)uin(rng);       // inside with margin
      }
      EXPECT_NEAR((double)forward(tn, z)[0], 1.0, (double)eps) << "d=" << d;
      const int axis = t % d;
      z[axis] = z[d + axis] - delta;          // delta before the low face
      EXPECT_LE((double)forward(tn, z)[0], (double)eps) << "d=" << d;
    }
  }
}

TEST(Blocks, ScaleHelpersInvertBounds) {
  // Each *_R helper must return a scale at which the corresponding bound
  // evaluates to at most the requested target.
  const ld a = 1.0L;
  for (ld target : {1e-2L, 1e-4L, 1e-6L}) {
    EXPECT_LE((double)bounds::identity(a, identity_R(a, target)), (double)target);
    EXPECT_LE((double)bounds::identity_chain(a, 3, identity_chain_R(a, 3, target)),
              (double)target);
    EXPECT_LE((double)bounds::product(a, product_R(a, target)), (double)target);
    EXPECT_LE((double)bounds::relu(a, relu_R(a, target)), (double)target);
    EXPECT_LE((double)bounds::monomial(a, 3, monomial_R(a, 3, target)), (double)target);
  }
}

}  // namespace
