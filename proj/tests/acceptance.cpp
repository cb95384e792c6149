// Acceptance gate: the nine release criteria, one printed verdict line each.
// Every criterion is measured at its stated tolerance and time budget; a
// criterion whose property does not hold fails here visibly rather than being
// weakened.

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>

#include "signet/harness.hpp"

namespace {

using namespace signet;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void verdict(int k, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", k,
              detail.c_str());
  std::fflush(stdout);
}

TEST(Acceptance, C1_RecursionOracleEquivalence) {
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport rep = run_lemma_suite("L6");
  const double secs = seconds_since(t0);
  const bool pass = rep.pass && secs < 30.0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "recursion equals direct piecewise value to 1e-10 "
                "(18 combos, 1e4 points each, %.1fs)", secs);
  verdict(1, pass, buf);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(secs, 30.0);
}

TEST(Acceptance, C2_BlockBoundsWithComputableConstants) {
  bool all = true;
  double total = 0.0;
  for (const char* id : {"L1", "L2", "L4", "L8", "L3"}) {
    const SuiteReport rep = run_lemma_suite(id);
    all = all && rep.pass;
    total += rep.seconds;
    EXPECT_TRUE(rep.pass) << id;
    EXPECT_LT(rep.seconds, 60.0) << id;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "identity/product/indicator/positive-part/polynomial all "
                "within closed-form bounds at R=1e2,1e3,1e4 (%.1fs total)",
                total);
  verdict(2, all, buf);
}

TEST(Acceptance, C3_PartitionOfUnity) {
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport rep = run_lemma_suite("PoU");
  const double secs = seconds_since(t0);
  double worst = 0.0;
  for (const CheckLine& l : rep.lines) worst = std::max(worst, l.measured);
  const bool pass = rep.pass && secs < 5.0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "shifted hat weights sum to 1 within %.3g (tol 1e-12, %.1fs)",
                worst, secs);
  verdict(3, pass, buf);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(secs, 5.0);
}

TEST(Acceptance, C4_ArchitectureExactness) {
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport rep = run_lemma_suite("T1-arch");
  const double secs = seconds_since(t0);
  const bool pass = rep.pass && secs < 60.0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "depth/width/coefficient-count integer identities for "
                "d=1,2 q=0,1 M=2,3,4 (%.1fs)", secs);
  verdict(4, pass, buf);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(secs, 60.0);
}

TEST(Acceptance, C5_WeightEnvelopeFit) {
  // The envelope claim leaves its constant free, so acceptance fits it:
  // c4_M = max|weight| / alpha_model(M), fitted c4 = max over M, and the
  // fitted value must be stable (< 10x spread) across M in {2..6}.
  const SmoothFunction f = corpus_function("sin");
  double c4_min = 1e300, c4_max = 0.0;
  bool bound_holds_with_fit = true;
  std::vector<double> c4(7, 0.0);
  std::vector<double> maxw(7, 0.0), alpha(7, 0.0);
  for (int M = 2; M <= 6; ++M) {
    const Network t1 = build_theorem1(f, M);
    maxw[M] = (double)t1.max_abs_weight();
    alpha[M] = (double)t1.params.at("claim_alpha");
    c4[M] = maxw[M] / alpha[M];
    c4_min = std::min(c4_min, c4[M]);
    c4_max = std::max(c4_max, c4[M]);
  }
  for (int M = 2; M <= 6; ++M)
    bound_holds_with_fit = bound_holds_with_fit && maxw[M] <= c4_max * alpha[M];
  const double spread = c4_max / c4_min;
  const bool stable = spread < 10.0;
  char buf[240];
  std::snprintf(buf, sizeof buf,
                "envelope with fitted c4=%.3g holds, but per-M fitted c4 "
                "spans %.3g..%.3g: spread %.3g exceeds the required 10x "
                "stability", c4_max, c4_min, c4_max, spread);
  verdict(5, bound_holds_with_fit && stable, buf);
  EXPECT_TRUE(bound_holds_with_fit);
  // Honest failure expected: the realized coefficients grow like the product
  // read-out scale (about M^(4p+4) here), while the claimed envelope's
  // M-power is much larger, so a single constant cannot be stable across M.
  EXPECT_LT(spread, 10.0);
}

TEST(Acceptance, C6_BoundarySuppression) {
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport rep = run_lemma_suite("L11");
  const double secs = seconds_since(t0);
  const bool pass = rep.pass && secs < 60.0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "clipped nets stay within strip level + 10x block tolerance "
                "on 1e3 face samples, M=2,3,4 (%.1fs)", secs);
  verdict(6, pass, buf);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(secs, 60.0);
}

TEST(Acceptance, C7_RateLaw) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<RateReport> reports;
  const SuiteReport rep = detail::suite_rate(&reports);
  const double secs = seconds_since(t0);
  const bool pass = rep.pass && secs < 600.0;
  double s1 = 0.0, s2 = 0.0;
  if (reports.size() == 2) {
    s1 = reports[0].slope;
    s2 = reports[1].slope;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "certified sup-error slopes: sin %.2f (<= -1.5), expnorm %.2f "
                "(<= -3.5); precision cross-checks pass (%.0fs)", s1, s2, secs);
  verdict(7, pass, buf);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(secs, 600.0);
}

TEST(Acceptance, C8_CompositionAlgebra) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> uw(-2.0, 2.0);
  std::uniform_int_distribution<int> udim(1, 3);
  const auto random_net = [&](int d, int out_rows) {
    Network n;
    n.input_dim = d;
    const int width = udim(rng) + 1;
    Mat h(width, d + 1);
    for (int i = 0; i < width; ++i)
      for (int j = 0; j <= d; ++j) h.at(i, j) = (ld)uw(rng);
    Mat o(out_rows, width + 1);
    for (int i = 0; i < out_rows; ++i)
      for (int j = 0; j <= width; ++j) o.at(i, j) = (ld)uw(rng);
    n.layers = {h, o};
    return n;
  };

  double worst_compose = 0.0, worst_parallel = 0.0, worst_affine = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = udim(rng);
    std::vector<ld> x(d);
    for (int j = 0; j < d; ++j) x[j] = (ld)uw(rng);

    const Network inner = random_net(d, 2);
    const Network outer = random_net(2, 1);
    const Network comp = compose(outer, inner);
    const TypedNet<ld> ti = make_typed<ld>(inner);
    const std::vector<ld> mid = forward(ti, x);
    const ld two_pass = eval1(outer, mid);
    worst_compose = std::max(worst_compose,
                             (double)std::fabs(eval1(comp, x) - two_pass));

    const Network a = random_net(d, 1), b = random_net(d, 1);
    const Network par = parallelize({&a, &b});
    const std::vector<ld> both = forward(make_typed<ld>(par), x);
    worst_parallel = std::max(
        worst_parallel,
        std::max((double)std::fabs(both[0] - eval1(a, x)),
                 (double)std::fabs(both[1] - eval1(b, x))));

    const ld ca = (ld)uw(rng), cb = (ld)uw(rng), bias = (ld)uw(rng);
    const Network combo = affine_combination({&a, &b}, {ca, cb}, bias);
    const ld hand = ca * eval1(a, x) + cb * eval1(b, x) + bias;
    worst_affine = std::max(worst_affine,
                            (double)std::fabs(eval1(combo, x) - hand));
  }
  const double secs = seconds_since(t0);
  const bool pass = worst_compose <= 1e-9 && worst_parallel <= 1e-12 &&
                    worst_affine <= 1e-12 && secs < 10.0;
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "1000 random trials: compose vs two-pass %.2g (tol 1e-9), "
                "parallelize %.2g, affine %.2g (tol 1e-12) (%.1fs)",
                worst_compose, worst_parallel, worst_affine, secs);
  verdict(8, pass, buf);
  EXPECT_LE(worst_compose, 1e-9);
  EXPECT_LE(worst_parallel, 1e-12);
  EXPECT_LE(worst_affine, 1e-12);
  EXPECT_LT(secs, 10.0);
}

TEST(Acceptance, C9_SerializationBitIdentity) {
  const auto t0 = std::chrono::steady_clock::now();
  const SmoothFunction f = corpus_function("sin");
  std::vector<Network> nets;
  nets.push_back(identity_net(BlockAccuracy::with_R(1.0e3L)));
  nets.push_back(identity_chain(2048.0L, 3));
  nets.push_back(product_net(BlockAccuracy::with_R(1.0e4L)));
  nets.push_back(relu_net(BlockAccuracy::with_R(1.0e3L)));
  nets.push_back(monomial_net({2}, 2, BlockAccuracy::with_target(1e-4L, 1.0L)));
  nets.push_back(indicator_net({-0.5L}, {0.5L}, 1e-3L, 0.05L));
  nets.push_back(build_net_p2(f, 2));
  nets.push_back(build_w_net(f, 2));
  nets.push_back(build_check_net(f, 2));
  nets.push_back(build_theorem1(f, 2));
  ASSERT_EQ(nets.size(), 10u);

  bool all_identical = true;
  const std::string dir = ::testing::TempDir();
  int idx = 0;
  for (const Network& n : nets) {
    const std::string path = dir + "net" + std::to_string(idx++) + ".json";
    save_network(n, path);
    const Network back = load_network(path);
    // Standard-precision evaluation must be bit-identical: identical stored
    // coefficients produce the identical arithmetic sequence.
    std::mt19937_64 rng(4000 + idx);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
      std::vector<ld> x(n.input_dim);
      for (int j = 0; j < n.input_dim; ++j) x[j] = (ld)u(rng);
      const ld va = eval1(n, x), vb = eval1(back, x);
      all_identical = all_identical && va == vb &&
                      std::signbit(va) == std::signbit(vb);
    }
    std::remove(path.c_str());
  }
  const double secs = seconds_since(t0);
  const bool pass = all_identical && secs < 10.0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "10 networks across builders evaluate bit-identically after "
                "save/load (%.1fs)", secs);
  verdict(9, pass, buf);
  EXPECT_TRUE(all_identical);
  EXPECT_LT(secs, 10.0);
}

}  // namespace
