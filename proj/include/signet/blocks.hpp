#pragma once
// Primitive sigmoid-network constructions: approximate identity units and
// chains, a four-unit product, a rectifier surrogate, monomial / polynomial
// evaluators, sharp cube indicators, and windowed test units.  Every builder
// carries an explicit steepness parameter R; each construction's stated error
// bound is monotone in R, so a target accuracy can be converted into an R by
// inverting the bound (clamped to the construction's admissible minimum).

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "signet/network.hpp"
#include "signet/sigmoid.hpp"
#include "signet/taylor.hpp"

namespace signet {

// Smallest k with 2^k >= n (n >= 1).
inline int ceil_log2(long long n) {
  int k = 0;
  long long v = 1;
  while (v < n) {
    v <<= 1;
    ++k;
  }
  return k;
}

// Smallest power of two >= x.  Every steepness scale is snapped to a power of
// two before any weight is stored: the reciprocal and all products of the
// scale with stored coefficients are then exact in the storage format, so the
// composition-time folds that must cancel bitwise (the anchored
// second-difference combinations) do cancel bitwise.  Raising a scale never
// weakens an error bound, since every bound decreases in R.
inline ld pow2ceil(ld x) {
  if (!(x > 0.0L)) throw std::invalid_argument("pow2ceil: positive scale required");
  int e = 0;
  const ld m = std::frexp(x, &e);  // x = m * 2^e, m in [1/2, 1)
  return (m == 0.5L) ? std::ldexp(1.0L, e - 1) : std::ldexp(1.0L, e);
}

inline void merge_flags(Network& out, std::initializer_list<const Network*> parts) {
  for (const Network* p : parts)
    for (const std::string& f : p->flags)
      if (std::find(out.flags.begin(), out.flags.end(), f) == out.flags.end())
        out.flags.push_back(f);
}

// ---------------------------------------------------------------------------
// Claimed error bounds, as functions of (input range, steepness).  Tests
// measure true errors against these; builders invert them to derive R.

namespace bounds {

inline ld identity(ld a, ld R, ld t = 0.0L) {
  const ld s = sigmoid(t);
  return sigmoid_norms().d2_max * a * a / (2.0L * s * (1.0L - s) * R);
}

inline ld identity_chain(ld range, int steps, ld R) {
  const ld g = range + 1.0L;
  return 2.0L * sigmoid_norms().d2_max * g * g * static_cast<ld>(steps) / R;
}

inline ld product(ld a, ld R) {
  return 75.0L * sigmoid_norms().d3_max * a * a * a / R;
}

inline ld relu(ld a, ld R) {
  const auto& n = sigmoid_norms();
  const ld c = std::max({n.d2_max, n.d3_max, 1.0L});
  return 208.0L * c * a * a * a / R;
}

inline ld monomial(ld a, int N, ld R) {
  if (N == 0) return 0.0L;
  const ld e = 5.0L * N + 3.0L;
  return 150.0L * sigmoid_norms().d3_max * static_cast<ld>(N) *
         std::pow(4.0L, e) * std::pow(a, e) / R;
}

}  // namespace bounds

// ---------------------------------------------------------------------------
// Steepness derivation (invert the bound, clamp to the admissible minimum).

inline ld identity_R(ld a, ld target, ld t = 0.0L) {
  if (target <= 0.0L) throw std::invalid_argument("identity_R: target must be positive");
  const ld s = sigmoid(t);
  return std::max(sigmoid_norms().d2_max * a * a / (2.0L * s * (1.0L - s) * target), 1.0L);
}

inline ld identity_chain_R(ld range, int steps, ld target) {
  if (target <= 0.0L) throw std::invalid_argument("identity_chain_R: target must be positive");
  const ld g = range + 1.0L;
  return std::max(2.0L * sigmoid_norms().d2_max * g * g * static_cast<ld>(steps) / target, 1.0L);
}

inline ld product_R(ld a, ld target) {
  if (target <= 0.0L) throw std::invalid_argument("product_R: target must be positive");
  return std::max(75.0L * sigmoid_norms().d3_max * a * a * a / target, 1.0L);
}

inline ld relu_min_R(ld a) { return std::max(2.0L * sigmoid_norms().d2_max * a, 1.0L); }

inline ld relu_R(ld a, ld target) {
  if (target <= 0.0L) throw std::invalid_argument("relu_R: target must be positive");
  const auto& n = sigmoid_norms();
  const ld c = std::max({n.d2_max, n.d3_max, 1.0L});
  return std::max(208.0L * c * a * a * a / target, relu_min_R(a));
}

inline ld monomial_min_R(ld a, int N) {
  const ld e = 3.0L * (N + 1);
  return std::max(75.0L * sigmoid_norms().d3_max * std::pow(4.0L, e) * std::pow(a, e), 1.0L);
}

inline ld monomial_R(ld a, int N, ld target) {
  if (target <= 0.0L) throw std::invalid_argument("monomial_R: target must be positive");
  if (N == 0) return monomial_min_R(a, 0);
  return std::max(bounds::monomial(a, N, 1.0L) / target, monomial_min_R(a, N));
}

// ---------------------------------------------------------------------------
// Accuracy knob: either an explicit steepness R, or a target error from which
// each builder derives R through its own bound.

struct BlockAccuracy {
  ld R = 0.0L;            // > 0: use as-is (subject to the builder's minimum)
  ld a_range = 1.0L;      // input sup bound the claim covers
  ld target_error = 0.0L; // used when R == 0

  static BlockAccuracy with_R(ld R, ld a = 1.0L) {
    BlockAccuracy b;
    b.R = R;
    b.a_range = a;
    return b;
  }
  static BlockAccuracy with_target(ld err, ld a = 1.0L) {
    BlockAccuracy b;
    b.target_error = err;
    b.a_range = a;
    return b;
  }
};

// ---------------------------------------------------------------------------
// Depth-0 affine conveniences.

inline Network affine_pick(int dim, int j) {
  Network n;
  n.input_dim = dim;
  Mat M(1, dim + 1);
  M.at(0, 1 + j) = 1.0L;
  n.layers.push_back(std::move(M));
  n.builder = "affine_pick";
  n.claimed_depth = 0;
  n.claimed_width = 0;
  return n;
}

inline Network affine_const(int dim, ld v) {
  Network n;
  n.input_dim = dim;
  Mat M(1, dim + 1);
  M.at(0, 0) = v;
  n.layers.push_back(std::move(M));
  n.builder = "affine_const";
  n.claimed_depth = 0;
  n.claimed_width = 0;
  return n;
}

// ---------------------------------------------------------------------------
// Approximate identity: x ~ (sigma(x/R + t) - sigma(t)) * R / sigma'(t).

inline Network identity_net(const BlockAccuracy& acc, ld t = 0.0L) {
  ld R = acc.R;
  if (R > 0.0L) {
    if (R < 1.0L) throw std::invalid_argument("identity_net: R below 1 rejected");
  } else {
    R = identity_R(acc.a_range, acc.target_error, t);
  }
  R = pow2ceil(R);
  const ld s = sigmoid(t);
  const ld s1 = s * (1.0L - s);
  Network n;
  n.input_dim = 1;
  Mat L1(1, 2);
  L1.at(0, 0) = t;
  L1.at(0, 1) = 1.0L / R;
  Mat out(1, 2);
  out.at(0, 0) = -s * R / s1;
  out.at(0, 1) = R / s1;
  n.layers = {std::move(L1), std::move(out)};
  n.builder = "identity";
  n.params = {{"R", R}, {"t", t}, {"a_range", acc.a_range}};
  n.claimed_depth = 1;
  n.claimed_width = 1;
  return n;
}

// steps-fold self-composition of the identity unit (steps = 0: exact affine
// pass-through).  All steps share one R; interior layers melt to coefficients
// in [-2, 4] independent of R.
inline Network identity_chain(ld R, int steps, ld t = 0.0L) {
  if (steps < 0) throw std::invalid_argument("identity_chain: negative step count");
  if (steps == 0) {
    Network n = affine_pick(1, 0);
    n.builder = "identity_chain";
    n.params = {{"R", R}, {"steps", 0.0L}};
    return n;
  }
  R = pow2ceil(R);
  Network n = identity_net(BlockAccuracy::with_R(R), t);
  for (int s = 1; s < steps; ++s) n = compose(identity_net(BlockAccuracy::with_R(R), t), n);
  n.builder = "identity_chain";
  n.params = {{"R", R}, {"t", t}, {"steps", static_cast<ld>(steps)}};
  n.claimed_depth = steps;
  n.claimed_width = 1;
  return n;
}

// Chain sized so the accumulated drift over |x| <= range stays below target.
inline Network identity_chain_for(ld range, int steps, ld target, ld t = 0.0L) {
  return identity_chain(identity_chain_R(range, steps, target), steps, t);
}

// ---------------------------------------------------------------------------
// Product: x*y from four sigmoid units via symmetric second differences around
// the curvature anchor; the combination bias cancels exactly.

inline Network product_net(const BlockAccuracy& acc) {
  ld R = acc.R;
  if (R > 0.0L) {
    if (R < 1.0L) throw std::invalid_argument("product_net: R below threshold rejected");
  } else {
    R = product_R(acc.a_range, acc.target_error);
  }
  R = pow2ceil(R);
  const ld t = t_mult_anchor();
  const ld s = sigmoid(t);
  const ld d2 = s * (1.0L - s) * (1.0L - 2.0L * s);
  const ld c = R * R / (4.0L * d2);
  Network n;
  n.input_dim = 2;
  Mat L1(4, 3);
  const ld signs[4][2] = {{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  for (int i = 0; i < 4; ++i) {
    L1.at(i, 0) = t;
    L1.at(i, 1) = signs[i][0] / R;
    L1.at(i, 2) = signs[i][1] / R;
  }
  Mat out(1, 5);
  out.at(0, 0) = 0.0L;
  out.at(0, 1) = c;
  out.at(0, 2) = c;
  out.at(0, 3) = -c;
  out.at(0, 4) = -c;
  n.layers = {std::move(L1), std::move(out)};
  n.builder = "product";
  n.params = {{"R", R}, {"t", t}, {"c", c}, {"a_range", acc.a_range}};
  n.claimed_depth = 1;
  n.claimed_width = 4;
  return n;
}

// ---------------------------------------------------------------------------
// Rectifier surrogate: product of an approximate identity with a steep gate,
// relu(x) ~ mult(id(x), sigma(R x)).

inline Network relu_net(const BlockAccuracy& acc) {
  const ld a = acc.a_range;
  if (a < 1.0L) throw std::invalid_argument("relu_net: input range below 1 rejected");
  ld R = acc.R;
  if (R > 0.0L) {
    if (R < relu_min_R(a)) throw std::invalid_argument("relu_net: R below threshold rejected");
  } else {
    R = relu_R(a, acc.target_error);
  }
  R = pow2ceil(R);
  Network id = identity_net(BlockAccuracy::with_R(R, a));
  Network gate;
  gate.input_dim = 1;
  Mat g1(1, 2);
  g1.at(0, 1) = R;
  Mat gout(1, 2);
  gout.at(0, 1) = 1.0L;
  gate.layers = {std::move(g1), std::move(gout)};
  Network par = parallelize({&id, &gate});
  Network n = compose(product_net(BlockAccuracy::with_R(R, a)), par);
  n.builder = "relu";
  n.params = {{"R", R}, {"a_range", a}};
  n.claimed_depth = 2;
  n.claimed_width = 4;
  return n;
}

// ---------------------------------------------------------------------------
// Monomial in the augmented variables: y * prod_j x_j^{e_j} over inputs
// (x_0..x_{d-1}, y), built as a balanced binary product tree padded with
// constant-1 leaves; total degree bounded by N fixes the tree depth.

inline Network monomial_net(const std::vector<int>& exponents, int N,
                            const BlockAccuracy& acc) {
  const int d = static_cast<int>(exponents.size());
  long long total = 0;
  for (int e : exponents) {
    if (e < 0) throw std::invalid_argument("monomial_net: negative exponent");
    total += e;
  }
  if (total > N) throw std::invalid_argument("monomial_net: exponent sum exceeds N");
  ld R = acc.R;
  bool raised = false;
  const ld min_R = monomial_min_R(acc.a_range, N);
  if (R > 0.0L) {
    if (R < min_R) {
      R = min_R;
      raised = true;
    }
  } else {
    R = monomial_R(acc.a_range, N, acc.target_error);
  }
  R = pow2ceil(R);
  const int kappa = ceil_log2(static_cast<long long>(N) + 1);
  const int dim = d + 1;

  std::vector<Network> cur;
  cur.push_back(affine_pick(dim, d));
  for (int j = 0; j < d; ++j)
    for (int r = 0; r < exponents[j]; ++r) cur.push_back(affine_pick(dim, j));

  // Balanced product tree over the real factors; an odd factor is relayed one
  // level by an identity unit at the shared scale, and short trees are topped
  // up the same way.  Relays keep every product input free of constant terms,
  // so the anchored second differences cancel exactly at any scale.
  while (cur.size() > 1) {
    std::vector<Network> nxt;
    size_t i = 0;
    for (; i + 1 < cur.size(); i += 2) {
      Network pair = parallelize({&cur[i], &cur[i + 1]});
      nxt.push_back(compose(product_net(BlockAccuracy::with_R(R)), pair));
    }
    if (i < cur.size())
      nxt.push_back(compose(identity_net(BlockAccuracy::with_R(R)), cur[i]));
    cur = std::move(nxt);
  }
  Network n = std::move(cur[0]);
  while (n.depth() < kappa)
    n = compose(identity_net(BlockAccuracy::with_R(R)), n);
  n.taps.clear();
  n.builder = "monomial";
  n.params = {{"R", R},
              {"N", static_cast<ld>(N)},
              {"a_range", acc.a_range}};
  for (int j = 0; j < d; ++j)
    n.params["e" + std::to_string(j)] = static_cast<ld>(exponents[j]);
  if (raised) n.flags.push_back("scale-raised-to-minimum");
  n.claimed_depth = kappa;
  n.claimed_width = 4LL * (N + 1);
  return n;
}

// ---------------------------------------------------------------------------
// Polynomial sum_i r_i * y_i * x^{k_i} over inputs (x_0..x_{d-1}, y_1..y_B),
// B = binom(d+N, d); every monomial shares one steepness R and one tree depth.

inline Network polynomial_net(int d, int N,
                              const std::vector<std::pair<std::vector<int>, ld>>& terms,
                              const BlockAccuracy& acc) {
  if (terms.empty()) throw std::invalid_argument("polynomial_net: no terms");
  const auto idx = multi_indices(d, N);
  const int B = static_cast<int>(idx.size());
  ld R = acc.R;
  bool raised = false;
  const ld min_R = monomial_min_R(acc.a_range, N);
  if (R > 0.0L) {
    if (R < min_R) {
      R = min_R;
      raised = true;
    }
  } else {
    R = monomial_R(acc.a_range, N, acc.target_error);
  }
  R = pow2ceil(R);

  std::vector<Network> monos;
  std::vector<ld> coeffs;
  ld rbar = 0.0L;
  for (const auto& [k, r] : terms) {
    if (static_cast<int>(k.size()) != d)
      throw std::invalid_argument("polynomial_net: index arity mismatch");
    const auto it = std::find(idx.begin(), idx.end(), k);
    if (it == idx.end()) throw std::invalid_argument("polynomial_net: unknown monomial index");
    const int pos = static_cast<int>(it - idx.begin());
    Network m = monomial_net(k, N, BlockAccuracy::with_R(R, acc.a_range));
    std::vector<int> map(d + 1);
    for (int j = 0; j < d; ++j) map[j] = j;
    map[d] = d + pos;
    monos.push_back(remap_inputs(m, d + B, map));
    coeffs.push_back(r);
    rbar = std::max(rbar, std::fabs(r));
  }
  std::vector<const Network*> ptrs;
  for (const Network& m : monos) ptrs.push_back(&m);
  Network n = affine_combination(ptrs, coeffs, 0.0L);
  n.taps.clear();
  n.builder = "polynomial";
  n.params = {{"R", R},
              {"N", static_cast<ld>(N)},
              {"B", static_cast<ld>(B)},
              {"a_range", acc.a_range},
              {"rbar", rbar},
              {"alpha_claim", 9.0L * std::max(rbar, 1.0L) * R * R * R * R}};
  if (raised) n.flags.push_back("scale-raised-to-minimum");
  n.claimed_depth = ceil_log2(static_cast<long long>(N) + 1);
  n.claimed_width = 4LL * (N + 1) * B;
  return n;
}

// ---------------------------------------------------------------------------
// Sharp cube indicator for [low, high): one steep pair per coordinate plus a
// steep aggregation unit.  Output always lies in (0, 1); within distance
// delta of the boundary the value is unconstrained.

inline Network indicator_net(const std::vector<ld>& low, const std::vector<ld>& high,
                             ld eps, ld delta) {
  const int d = static_cast<int>(low.size());
  if (d < 1 || high.size() != low.size())
    throw std::invalid_argument("indicator_net: bad corner vectors");
  if (delta <= 0.0L) throw std::invalid_argument("indicator_net: delta must be positive");
  if (!(eps > 0.0L && eps < 0.5L))
    throw std::invalid_argument("indicator_net: eps must lie in (0, 1/2)");
  for (int i = 0; i < d; ++i)
    if (high[i] - low[i] < 2.0L * delta)
      throw std::invalid_argument("indicator_net: cube thinner than 2*delta");
  // Gain calibration: at distance delta inside a face the face unit reads
  // sigma(-ln(4d-1)) = 1/(4d), so the 2d-unit badness sum stays <= 1/2 for any
  // fully inside point; a point past one face by delta pushes that single unit
  // to 1 - 1/(4d) >= 3/4.  The aggregate threshold 5/8 therefore separates
  // "inside in every coordinate" from "outside in at least one coordinate"
  // with margin 1/8 on both sides, uniformly in d.
  const ld B2 = std::log(4.0L * d - 1.0L) / delta;
  const ld B1 = 8.0L * std::log(1.0L / eps - 1.0L);
  Network n;
  n.input_dim = d;
  Mat L1(2 * d, d + 1);
  for (int i = 0; i < d; ++i) {
    L1.at(2 * i, 0) = B2 * low[i];
    L1.at(2 * i, 1 + i) = -B2;
    L1.at(2 * i + 1, 0) = -B2 * high[i];
    L1.at(2 * i + 1, 1 + i) = B2;
  }
  Mat L2(1, 2 * d + 1);
  L2.at(0, 0) = B1 * 0.625L;
  for (int j = 1; j <= 2 * d; ++j) L2.at(0, j) = -B1;
  Mat out(1, 2);
  out.at(0, 1) = 1.0L;
  n.layers = {std::move(L1), std::move(L2), std::move(out)};
  n.builder = "indicator";
  n.params = {{"B1", B1}, {"B2", B2}, {"eps", eps}, {"delta", delta}};
  for (int i = 0; i < d; ++i) {
    n.params["low" + std::to_string(i)] = low[i];
    n.params["high" + std::to_string(i)] = high[i];
  }
  n.claimed_depth = 2;
  n.claimed_width = 2 * d;
  return n;
}

// ---------------------------------------------------------------------------
// Windowed test unit over inputs (x_0..x_{d-1}, a_0..a_{d-1}, s): carries the
// channel value s through a two-step identity chain while an indicator for the
// cube [a, a + side) gates it; a product unit joins the two tracks.

inline Network test_net(int d, ld side, ld eps, ld delta, ld s_bound) {
  if (d < 1) throw std::invalid_argument("test_net: dimension must be >= 1");
  if (delta <= 0.0L || side < 2.0L * delta)
    throw std::invalid_argument("test_net: cube thinner than 2*delta");
  if (!(eps > 0.0L)) throw std::invalid_argument("test_net: eps must be positive");
  const ld S = std::max(s_bound, 1.0L);
  const ld eps_ind = eps / (3.0L * S);
  if (eps_ind >= 0.5L) throw std::invalid_argument("test_net: accuracy too loose");
  const ld B2 = std::log(4.0L * d - 1.0L) / delta;
  const ld B1 = 8.0L * std::log(1.0L / eps_ind - 1.0L);
  const ld R_id = identity_chain_R(S, 2, eps / 3.0L);
  const ld R_m = product_R(2.0L * S, eps / 3.0L);

  // Channel track: two identity steps applied to input index 2d.
  Network carry = identity_chain(R_id, 2);
  std::vector<int> cmap = {2 * d};
  carry = remap_inputs(carry, 2 * d + 1, cmap);

  // Indicator track with movable corner inputs: lower corner a is an input,
  // upper corner is a + side.
  Network ind;
  ind.input_dim = 2 * d + 1;
  Mat L1(2 * d, 2 * d + 2);
  for (int i = 0; i < d; ++i) {
    L1.at(2 * i, 1 + i) = -B2;
    L1.at(2 * i, 1 + d + i) = B2;
    L1.at(2 * i + 1, 0) = -B2 * side;
    L1.at(2 * i + 1, 1 + i) = B2;
    L1.at(2 * i + 1, 1 + d + i) = -B2;
  }
  Mat L2(1, 2 * d + 1);
  L2.at(0, 0) = B1 * 0.625L;
  for (int j = 1; j <= 2 * d; ++j) L2.at(0, j) = -B1;
  Mat iout(1, 2);
  iout.at(0, 1) = 1.0L;
  ind.layers = {std::move(L1), std::move(L2), std::move(iout)};

  Network par = parallelize({&carry, &ind});
  Network n = compose(product_net(BlockAccuracy::with_R(R_m, 2.0L * S)), par);
  n.taps.clear();
  {
    // Read-outs for the two tracks entering the product stage.
    AffineTap tc;
    tc.layer = 2;
    tc.map = Mat(1, 3);
    tc.map.at(0, 0) = carry.layers.back().at(0, 0);
    tc.map.at(0, 1) = carry.layers.back().at(0, 1);
    n.taps["carried"] = std::move(tc);
    AffineTap tg;
    tg.layer = 2;
    tg.map = Mat(1, 3);
    tg.map.at(0, 2) = 1.0L;
    n.taps["gate"] = std::move(tg);
  }
  n.builder = "test";
  n.params = {{"B1", B1},     {"B2", B2},       {"R_id", R_id},
              {"R_mult", R_m}, {"eps", eps},     {"delta", delta},
              {"side", side},  {"s_bound", s_bound}};
  n.claimed_depth = 3;
  n.claimed_width = 2 * d + 2;
  return n;
}

// Depth-matched test unit for a constant channel s == 1 at a fixed cube: an
// indicator followed by one identity step, so it lines up with the full test
// units while spending only one extra unit of width.

inline Network constant_test_net(const std::vector<ld>& low, const std::vector<ld>& high,
                                 ld eps, ld delta) {
  Network ind = indicator_net(low, high, eps / 2.0L, delta);
  const ld R = identity_R(2.0L, eps / 2.0L);
  Network n = compose(identity_net(BlockAccuracy::with_R(R, 2.0L)), ind);
  merge_flags(n, {&ind});
  ld B1 = ind.params.at("B1"), B2 = ind.params.at("B2");
  n.builder = "constant_test";
  n.params = {{"B1", B1}, {"B2", B2}, {"R_id", R}, {"eps", eps}, {"delta", delta}};
  n.claimed_depth = 3;
  n.claimed_width = 2 * static_cast<int>(low.size());
  return n;
}

// Depth-matched window detector over inputs (x_0..x_{d-1}, a_0..a_{d-1}): an
// indicator for the movable cube [a, a + side) followed by one identity step.
// Occupies the same three-layer slot as a full test unit at widths (2d, 1, 1).

inline Network movable_window_net(int d, ld side, ld eps, ld delta) {
  if (d < 1) throw std::invalid_argument("movable_window_net: dimension must be >= 1");
  if (delta <= 0.0L || side < 2.0L * delta)
    throw std::invalid_argument("movable_window_net: cube thinner than 2*delta");
  const ld eps_ind = eps / 4.0L;
  if (!(eps_ind > 0.0L && eps_ind < 0.5L))
    throw std::invalid_argument("movable_window_net: accuracy too loose");
  // Same separation scheme as the static indicator (badness sum <= 1/2 inside,
  // >= 3/4 once any coordinate is delta outside, threshold 5/8), except the
  // badness units pass through one relay step before aggregation.  The relay
  // drift budget 1/(32d) per unit spends half of the 1/8 margin, and the outer
  // gain doubles to purchase the target accuracy from the remaining half.
  const ld B2 = std::log(4.0L * d - 1.0L) / delta;
  const ld B1 = 16.0L * std::log(1.0L / eps_ind - 1.0L);
  const ld Rf = identity_R(1.0L, 1.0L / (32.0L * d));

  Network n;
  n.input_dim = 2 * d;
  Mat L1(2 * d, 2 * d + 1);
  for (int i = 0; i < d; ++i) {
    L1.at(2 * i, 1 + i) = -B2;
    L1.at(2 * i, 1 + d + i) = B2;
    L1.at(2 * i + 1, 0) = -B2 * side;
    L1.at(2 * i + 1, 1 + i) = B2;
    L1.at(2 * i + 1, 1 + d + i) = -B2;
  }
  Mat L2(2 * d, 2 * d + 1);
  for (int j = 0; j < 2 * d; ++j) L2.at(j, 1 + j) = 1.0L / Rf;
  Mat L3(1, 2 * d + 1);
  L3.at(0, 0) = B1 * (0.625L + 4.0L * d * Rf);
  for (int j = 1; j <= 2 * d; ++j) L3.at(0, j) = -B1 * 4.0L * Rf;
  Mat out(1, 2);
  out.at(0, 1) = 1.0L;
  n.layers = {std::move(L1), std::move(L2), std::move(L3), std::move(out)};
  n.builder = "movable_window";
  n.params = {{"B1", B1}, {"B2", B2}, {"R_face", Rf},
              {"eps", eps}, {"delta", delta}, {"side", side}};
  n.claimed_depth = 3;
  n.claimed_width = 2 * d;
  return n;
}

}  // namespace signet
