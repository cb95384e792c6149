#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "signet/network.hpp"

namespace {

using namespace signet;

// Small hand-built network: two sigmoid units over one input, affine read-out.
Network tiny_net(ld w1, ld b1, ld w2, ld b2, ld c0, ld c1, ld c2) {
  Network n;
  n.input_dim = 1;
  Mat hidden(2, 2);
  hidden.at(0, 0) = b1;
  hidden.at(0, 1) = w1;
  hidden.at(1, 0) = b2;
  hidden.at(1, 1) = w2;
  Mat out(1, 3);
  out.at(0, 0) = c0;
  out.at(0, 1) = c1;
  out.at(0, 2) = c2;
  n.layers = {hidden, out};
  return n;
}

ld tiny_exact(const Network& n, ld x) {
  const Mat& h = n.layers[0];
  const Mat& o = n.layers[1];
  const ld s1 = sigmoid<ld>(h.at(0, 0) + h.at(0, 1) * x);
  const ld s2 = sigmoid<ld>(h.at(1, 0) + h.at(1, 1) * x);
  return o.at(0, 0) + o.at(0, 1) * s1 + o.at(0, 2) * s2;
}

TEST(Network, ForwardMatchesHandComputation) {
  const Network n = tiny_net(2.0L, 0.5L, 1.0L, -1.0L, 3.0L, -1.0L, 2.0L);
  EXPECT_EQ(n.depth(), 1);
  EXPECT_EQ(n.out_rows(), 1);
  EXPECT_EQ(n.max_hidden_width(), 2);
  for (ld x : {-2.0L, -0.3L, 0.0L, 0.7L, 1.9L})
    EXPECT_NEAR((double)eval1(n, {x}), (double)tiny_exact(n, x), 1e-18);
}

TEST(Network, TypedPathsAgree) {
  const Network n = tiny_net(-1.5L, 0.25L, 3.0L, 0.0L, 0.5L, 1.0L, -0.5L);
  const TypedNet<double> td = make_typed<double>(n);
  const TypedNet<ld> tl = make_typed<ld>(n);
  set_big_float_bits(256);
  const TypedNet<big_float> tb = make_typed<big_float>(n);
  for (ld x : {-1.0L, -0.1L, 0.4L, 2.0L}) {
    const double vd = forward(td, std::vector<double>{(double)x})[0];
    const ld vl = forward(tl, std::vector<ld>{x})[0];
    const ld vb = to_ld(forward(tb, std::vector<big_float>{big_float(x)})[0]);
    EXPECT_NEAR(vd, (double)vl, 1e-14);
    EXPECT_NEAR((double)(vb - vl), 0.0, 1e-17);
  }
}

TEST(Network, ComposeEqualsTwoPass) {
  const Network inner = tiny_net(2.0L, -0.2L, -1.0L, 0.3L, 0.1L, 1.2L, 0.8L);
  const Network outer = tiny_net(0.7L, 0.1L, -0.4L, -0.6L, -2.0L, 1.0L, 1.0L);
  const Network c = compose(outer, inner);
  EXPECT_EQ(c.depth(), inner.depth() + outer.depth());
  EXPECT_EQ(c.input_dim, 1);
  for (ld x : {-1.8L, -0.5L, 0.0L, 0.9L, 1.4L}) {
    const ld two_pass = eval1(outer, {eval1(inner, {x})});
    EXPECT_NEAR((double)eval1(c, {x}), (double)two_pass, 1e-16);
  }
  const Network two_outputs = parallelize({&inner, &inner});
  EXPECT_THROW(compose(outer, two_outputs), std::logic_error);
}

TEST(Network, ParallelizePreservesComponents) {
  const Network a = tiny_net(1.0L, 0.0L, 2.0L, 0.5L, 0.0L, 1.0L, -1.0L);
  const Network b = tiny_net(-0.5L, 1.0L, 0.25L, -0.25L, 1.0L, 0.5L, 0.5L);
  const Network p = parallelize({&a, &b});
  EXPECT_EQ(p.out_rows(), 2);
  EXPECT_EQ(p.max_hidden_width(), 4);
  const TypedNet<ld> tp = make_typed<ld>(p);
  for (ld x : {-1.0L, 0.2L, 0.8L}) {
    const std::vector<ld> out = forward(tp, std::vector<ld>{x});
    EXPECT_NEAR((double)out[0], (double)eval1(a, {x}), 1e-18);
    EXPECT_NEAR((double)out[1], (double)eval1(b, {x}), 1e-18);
  }
}

TEST(Network, AffineCombinationIsLinear) {
  const Network a = tiny_net(1.0L, 0.3L, -2.0L, 0.1L, 0.2L, 1.0L, 0.4L);
  const Network b = tiny_net(0.6L, -0.8L, 1.5L, 0.0L, -0.1L, 0.7L, -0.9L);
  const Network combo = affine_combination({&a, &b}, {2.5L, -1.25L}, 0.75L);
  EXPECT_EQ(combo.depth(), a.depth());
  for (ld x : {-1.2L, -0.1L, 0.5L, 1.1L}) {
    const ld expect = 2.5L * eval1(a, {x}) - 1.25L * eval1(b, {x}) + 0.75L;
    EXPECT_NEAR((double)eval1(combo, {x}), (double)expect, 1e-17);
  }
}

TEST(Network, RemapInputsSelectsCoordinates) {
  const Network n = tiny_net(1.1L, -0.4L, 0.9L, 0.2L, 0.3L, -1.0L, 2.0L);
  const Network wide = remap_inputs(n, 3, {2});
  EXPECT_EQ(wide.input_dim, 3);
  for (ld x : {-0.9L, 0.0L, 1.3L})
    EXPECT_NEAR((double)eval1(wide, {5.0L, -7.0L, x}), (double)eval1(n, {x}),
                1e-18);
  EXPECT_THROW(remap_inputs(n, 3, {0, 1}), std::logic_error);
}

TEST(Network, TapsFollowComposition) {
  Network inner = tiny_net(2.0L, 0.0L, 1.0L, 1.0L, 0.0L, 1.0L, 1.0L);
  AffineTap tap;
  tap.layer = 1;  // read the first hidden unit directly
  tap.map = Mat(1, 3);
  tap.map.at(0, 1) = 1.0L;
  inner.taps["unit0"] = tap;
  const Network outer = tiny_net(1.0L, 0.0L, -1.0L, 0.0L, 0.0L, 1.0L, 1.0L);
  const Network c = compose(outer, inner);
  ASSERT_TRUE(c.taps.count("unit0"));
  const TypedNet<ld> tc = make_typed<ld>(c);
  for (ld x : {-0.7L, 0.25L}) {
    const auto h = forward_all(tc, std::vector<ld>{x});
    const ld got = tap_value<ld>(c.taps.at("unit0"), h);
    EXPECT_NEAR((double)got, (double)sigmoid<ld>(2.0L * x), 1e-18);
  }
}

TEST(Network, DenseParamCountClosedForm) {
  // (d+1)r + (L-1)r(r+1) + (r+1): count the coefficient slots of a
  // uniform-width dense template directly and compare.
  for (int d : {1, 2, 3}) {
    for (int L : {1, 2, 5}) {
      for (int r : {1, 4, 9}) {
        long long slots = static_cast<long long>(r) * (d + 1);
        for (int s = 1; s < L; ++s) slots += static_cast<long long>(r) * (r + 1);
        slots += r + 1;
        EXPECT_EQ(dense_param_count(L, r, d), slots);
      }
    }
  }
}

TEST(Network, MaxAbsWeight) {
  const Network n = tiny_net(1.0L, -9.5L, 2.0L, 0.5L, 3.0L, -1.0L, 2.0L);
  EXPECT_DOUBLE_EQ((double)n.max_abs_weight(), 9.5);
}

}  // namespace
