#pragma once
// Assembly of the two-scale approximation networks.  A shared five-layer
// trunk computes, by pure sigmoid arithmetic, the staged values of the
// recursion in taylor.hpp: carried point coordinates, the coarse-corner and
// derivative fields, windowed channel tests that select the fine-scale data,
// and (optionally) boundary-badness tracks.  On top of the trunk sit small
// output stages: a polynomial head, a hat-weight head, a boundary-check gate,
// a clipping pair, a weight-times-value product, and the shifted-copy sum
// that yields the final approximant.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "signet/blocks.hpp"
#include "signet/functions.hpp"
#include "signet/network.hpp"
#include "signet/partition.hpp"
#include "signet/taylor.hpp"

namespace signet {

namespace detail {
inline ld checked_scale(ld v, const char* what) {
  if (!std::isfinite(v))
    throw std::overflow_error(std::string("derived scale overflows long double: ") + what);
  return v;
}
inline void merge_flags_all(Network& n, const std::vector<Network>& parts) {
  for (const auto& p : parts)
    for (const auto& f : p.flags) {
      bool seen = false;
      for (const auto& g : n.flags) seen = seen || (g == f);
      if (!seen) n.flags.push_back(f);
    }
}
inline Network affine_net(Mat m) {
  Network n;
  n.input_dim = m.cols - 1;
  n.layers.push_back(std::move(m));
  return n;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Derived build parameters.  Geometry (cell sizes, margins, window shrink) is
// fixed by M and the rate p = q + s; every accuracy target scales with
// `boost` so the whole construction can be tightened uniformly for
// convergence experiments.  `tight_gate` switches the gate/badness accuracies
// to the finer scale the clipping stage needs; the boundary margins
// themselves do not move.

struct BuildParams {
  SmoothFunction f;
  int M = 2;
  ld boost = 1.0L;
  bool tight_gate = false;

  int d = 1, q = 0;
  ld p = 1.0L, a = 1.0L;
  ld cq = 0.0L;          // scanned sup of derivatives up to order q
  ld supn = 0.0L;        // scanned sup of |f|
  ld range_norm = 1.0L;  // max{a, cq}
  ld unit_norm = 1.0L;   // max{cq, 1}

  ld M2p = 1.0L, M2p2 = 1.0L;
  long long Md = 1, B = 1;
  int kappa = 0, logd = 0;

  // geometry (boost-independent)
  ld delta_geo = 0.0L;  // indicator margin 1/(4 M^{2p+2})
  ld shrink = 0.0L;     // check-window shrink 5/(4 M^{2p+2})
  ld side_win = 0.0L;   // shrunken fine-cell side

  // accuracy scales
  ld eps_field = 0.0L;  // corner/derivative fields and channel tests
  ld eps_check = 0.0L;  // boundary-badness indicators and windows
  ld s_bound = 0.0L;    // carried-channel magnitude bound
  ld R_A = 0.0L;        // stage-A point track
  ld R_B = 0.0L;        // stage-B point refinement
  ld R_cube = 0.0L;     // badness cubing chain
  ld cube_range = 2.0L;
  ld R_p = 0.0L;        // polynomial head scale
  ld R_p_eff = 0.0L;    // the scale the head's product stage actually stores
  ld poly_range = 1.0L;

  // gate / clipping
  ld acc_scale = 1.0L;  // gate target scale (M^{2p+2}, or its tightened form)
  ld B1_gate = 0.0L, B2_gate = 1.0L;
  ld B_true = 1.0L;
  ld clip_range = 1.0L, clip_R = 0.0L, clip_target = 0.0L;
  ld gate_sync_R = 0.0L;
  ld G_regate = 1.0L;  // saturating relay gain for gate-like channels

  // weight head
  ld z_scale = 1.0L;
  ld w_range = 1.0L, w_R = 0.0L, w_target = 0.0L;
  ld w_tree_R = 0.0L;

  // final product
  ld mult_range = 1.0L, mult_R = 0.0L;

  std::vector<std::string> warnings;
};

inline BuildParams derive_params(const SmoothFunction& f, int M, ld boost = 1.0L,
                                 bool tight_gate = false) {
  using detail::checked_scale;
  if (M < 2) throw std::invalid_argument("derive_params: M must be >= 2");
  if (boost < 1.0L) throw std::invalid_argument("derive_params: boost must be >= 1");
  BuildParams P;
  P.f = f;
  P.M = M;
  P.boost = boost;
  P.tight_gate = tight_gate;
  P.d = f.d;
  P.q = f.q;
  P.p = static_cast<ld>(f.p());
  P.a = f.a;
  P.cq = scan_cq_norm(f);
  P.supn = scan_sup_norm(f);
  P.range_norm = std::max(P.a, P.cq);
  P.unit_norm = std::max(P.cq, 1.0L);

  P.M2p = checked_scale(std::pow(static_cast<ld>(M), 2.0L * P.p), "M^2p");
  P.M2p2 = checked_scale(std::pow(static_cast<ld>(M), 2.0L * P.p + 2.0L), "M^(2p+2)");
  P.Md = 1;
  for (int j = 0; j < P.d; ++j) P.Md *= M;
  P.B = binom(P.d + P.q, P.d);
  P.kappa = ceil_log2(P.q + 1);
  P.logd = ceil_log2(P.d);

  P.delta_geo = 1.0L / (4.0L * P.M2p2);
  P.shrink = 5.0L / (4.0L * P.M2p2);
  const ld fine_side = 2.0L * P.a / (static_cast<ld>(M) * M);
  P.side_win = fine_side - 2.0L * P.shrink;

  const ld Mdld = static_cast<ld>(P.Md);
  P.eps_field = 1.0L / (4.0L * P.range_norm * P.M2p2 * Mdld * boost);
  P.s_bound = P.range_norm + 1.0L;
  P.R_A = identity_chain_R(P.a + 1.0L, 2, 1.0L / (6.0L * P.M2p2 * boost));
  P.R_B = identity_chain_R(P.a + 1.0L, 3, 1.0L / (4.0L * P.M2p2 * boost));

  P.B_true = checked_scale(
      std::pow(2.0L, 2.0L * (P.d + 1)) *
              std::exp(std::pow(2.0L, 2.0L * (P.d + 1) + 1.0L) * P.a * P.d) * P.unit_norm +
          1.0L,
      "value envelope");
  P.acc_scale = tight_gate ? checked_scale(3.0L * P.M2p2 * P.B_true, "gate scale") : P.M2p2;
  P.eps_check = 1.0L / (4.0L * P.range_norm * P.acc_scale * Mdld * Mdld * boost);
  P.B1_gate = 4.0L * std::log(P.acc_scale * boost - 1.0L);
  P.B2_gate = Mdld;
  P.cube_range = (P.d == 1) ? 2.0L : 2.0L * Mdld;
  P.R_cube =
      identity_chain_R(P.cube_range, 3, 1.0L / (2.0L * P.acc_scale * Mdld * boost));
  P.G_regate = 2.0L * std::log(4.0L * P.acc_scale * Mdld * Mdld * boost);

  P.poly_range = std::pow(2.0L, 2.0L * (P.d + 1) + 1.0L) * std::max(P.range_norm, 1.0L);
  P.R_p = P.M2p * boost;
  P.R_p_eff = pow2ceil(std::max(P.R_p, monomial_min_R(P.poly_range, P.q)));

  P.clip_target = 1.0L / (3.0L * P.M2p2 * boost);
  P.clip_range = (P.q == 0) ? P.B_true * (4.0L * Mdld + 6.0L) : 4.0L * P.B_true;
  P.clip_R = checked_scale(relu_R(P.clip_range, P.clip_target), "clip scale");
  if (P.kappa > 1)
    P.gate_sync_R = identity_chain_R(1.0L, P.kappa - 1,
                                     1.0L / (3.0L * P.M2p2 * P.B_true * boost));

  P.z_scale = static_cast<ld>(M) * M / P.a;
  P.w_target = 1.0L / (4.0L * P.M2p * boost);
  P.w_range = std::pow(2.0L, 2.0L * P.d + 3.0L) * M * M + 2.0L;
  P.w_R = relu_R(P.w_range, P.w_target);
  if (P.d >= 2) P.w_tree_R = product_R(2.0L, 1.0L / (P.M2p * boost));

  P.mult_range = checked_scale(2.0L * P.B_true, "product range");
  P.mult_R = checked_scale(product_R(P.mult_range, 1.0L / (P.M2p * boost)), "product scale");

  if (P.M2p < std::max(std::pow(2.0L, P.d), 12.0L * P.d))
    P.warnings.push_back("resolution-below-threshold");
  if (P.d >= 2) {
    const ld w_min = (P.d - 1) * std::pow(4.0L, 5.0L * P.d - 2.0L) *
                     std::pow(2.0L, 5.0L * P.d - 2.0L);
    if (M < w_min) P.warnings.push_back("weight-resolution-threshold");
  }
  return P;
}

// ---------------------------------------------------------------------------
// Shared trunk: depth 5, input dimension d.  Output slots are recorded in a
// layout so the heads can form their pre-affine read-outs.

struct TrunkConfig {
  bool stage_b = true;         // point refinement + windowed channel tests
  bool deriv_channels = true;  // carry derivative channels, not just coordinates
  bool check_bank = false;     // boundary-badness bank, cubing chain, windows
};

struct TrunkLayout {
  int n5 = 0;
  int phi12 = -1;  // d refined point coordinates
  int coord = -1;  // Md*d coordinate-channel tests (window-major)
  int deriv = -1;  // Md*B derivative-channel tests (window-major)
  int ghat = -1;   // cubed coarse-strip badness
  int win = -1;    // Md fine-window detectors
};

struct TrunkNet {
  Network net;
  TrunkLayout layout;
};

inline TrunkNet build_trunk(const BuildParams& P, const GridPartition& coarse,
                            const GridPartition& fine, const TrunkConfig& cfg) {
  const int d = P.d;
  const long long Md = P.Md;
  const auto idx = multi_indices(d, P.q);
  const int B = static_cast<int>(idx.size());
  const auto offs = offset_vectors(P.a, P.M, d);
  std::vector<std::vector<ld>> corners(Md);
  for (long long k = 0; k < Md; ++k) corners[k] = coarse.corner(k + 1);

  // ---- stage A: point track, corner bank, optional badness bank ----
  std::vector<Network> acomp;
  for (int j = 0; j < d; ++j)
    acomp.push_back(remap_inputs(identity_chain(P.R_A, 2), d, {j}));
  for (long long k = 0; k < Md; ++k) {
    std::vector<ld> lo = corners[k], hi = corners[k];
    for (int j = 0; j < d; ++j) hi[j] += coarse.side();
    acomp.push_back(indicator_net(lo, hi, P.eps_field, P.delta_geo));
  }
  if (cfg.check_bank)
    for (long long k = 0; k < Md; ++k) {
      std::vector<ld> lo = corners[k], hi = corners[k];
      for (int j = 0; j < d; ++j) {
        lo[j] += P.shrink;
        hi[j] += coarse.side() - P.shrink;
      }
      acomp.push_back(indicator_net(lo, hi, P.eps_check, P.delta_geo));
    }
  std::vector<const Network*> aptr;
  aptr.reserve(acomp.size());
  for (auto& n : acomp) aptr.push_back(&n);
  Network A = parallelize(aptr);
  A.taps.clear();
  const Mat Aout = A.layers.back();
  const int nA = A.out_rows();
  // stage-A output slots: [0,d) point, [d,d+Md) corner bank, then badness bank

  // ---- stage B: refinement chains, channel tests, badness tracks ----
  std::vector<Network> bcomp;
  auto channel_test = [&](long long s, const Mat& chan) {
    Mat pre(2 * d + 1, nA + 1);
    for (int j = 0; j < d; ++j) pre.at(j, 1 + j) = 1.0L;
    for (int j = 0; j < d; ++j) {
      pre.at(d + j, 0) = offs[s][j];
      for (long long k = 0; k < Md; ++k) pre.at(d + j, 1 + d + k) = corners[k][j];
    }
    for (int c = 0; c <= nA; ++c) pre.at(2 * d, c) = chan.at(0, c);
    Network t = test_net(d, fine.side(), P.eps_field, P.delta_geo, P.s_bound);
    Network comp = compose(t, detail::affine_net(std::move(pre)));
    comp.flags = t.flags;
    comp.taps.clear();
    return comp;
  };
  if (cfg.stage_b) {
    // When the refined coordinate will enter the head's product stage, the
    // relay finishes at that stage's own stored scale; its read-out then folds
    // into the anchored second differences without rounding.
    const bool product_fed = cfg.deriv_channels && P.q >= 1;
    const Network xrelay =
        product_fed
            ? compose(identity_net(BlockAccuracy::with_R(P.R_p_eff, P.a + 1.0L)),
                      identity_chain(P.R_B, 2))
            : identity_chain(P.R_B, 3);
    for (int j = 0; j < d; ++j)
      bcomp.push_back(remap_inputs(xrelay, nA, {j}));
    for (long long s = 0; s < Md; ++s)
      for (int t = 0; t < d; ++t) {
        Mat ch(1, nA + 1);
        ch.at(0, 0) = offs[s][t];
        for (long long k = 0; k < Md; ++k) ch.at(0, 1 + d + k) = corners[k][t];
        bcomp.push_back(channel_test(s, ch));
      }
    if (cfg.deriv_channels)
      for (long long s = 0; s < Md; ++s)
        for (int i = 0; i < B; ++i) {
          Mat ch(1, nA + 1);
          for (long long k = 0; k < Md; ++k) {
            std::vector<ld> pt = corners[k];
            for (int j = 0; j < d; ++j) pt[j] += offs[s][j];
            ch.at(0, 1 + d + k) = P.f.derivative(idx[i], pt);
          }
          bcomp.push_back(channel_test(s, ch));
        }
  }
  if (cfg.check_bank) {
    // Strip badness relayed through saturating steps: stays within e^{-G/2}
    // of 0 on shrunken interiors and of 1 on the strip skeleton, and leaves
    // the stage read-out as a plain selector row.
    const ld G = P.G_regate;
    Network g;
    g.input_dim = nA;
    Mat g1(1, nA + 1);
    g1.at(0, 0) = G / 2.0L;  // G * (fhat1 - 1/2), fhat1 = 1 - sum of checks
    for (long long k = 0; k < Md; ++k) g1.at(0, 1 + d + Md + k) = -G;
    Mat g2(1, 2);
    g2.at(0, 0) = -G / 2.0L;
    g2.at(0, 1) = G;
    Mat g3 = g2;
    Mat gout(1, 2);
    gout.at(0, 1) = 1.0L;
    g.layers = {std::move(g1), std::move(g2), std::move(g3), std::move(gout)};
    bcomp.push_back(std::move(g));
    for (long long s = 0; s < Md; ++s) {
      Mat pre(2 * d, nA + 1);
      for (int j = 0; j < d; ++j) pre.at(j, 1 + j) = 1.0L;
      for (int j = 0; j < d; ++j) {
        pre.at(d + j, 0) = offs[s][j] + P.shrink;
        for (long long k = 0; k < Md; ++k) pre.at(d + j, 1 + d + k) = corners[k][j];
      }
      Network w = movable_window_net(d, P.side_win, P.eps_check, P.delta_geo);
      Network comp = compose(w, detail::affine_net(std::move(pre)));
      comp.flags = w.flags;
      bcomp.push_back(std::move(comp));
    }
  }

  TrunkLayout L;
  {
    int pos = 0;
    if (cfg.stage_b) {
      L.phi12 = pos;
      pos += d;
      L.coord = pos;
      pos += static_cast<int>(Md) * d;
      if (cfg.deriv_channels) {
        L.deriv = pos;
        pos += static_cast<int>(Md) * B;
      }
    }
    if (cfg.check_bank) {
      L.ghat = pos++;
      L.win = pos;
      pos += static_cast<int>(Md);
    }
    L.n5 = pos;
  }

  std::vector<const Network*> bptr;
  bptr.reserve(bcomp.size());
  for (auto& n : bcomp) bptr.push_back(&n);
  Network Bnet = parallelize(bptr);
  Bnet.taps.clear();

  Network trunk = compose(Bnet, A);
  trunk.taps.clear();
  detail::merge_flags_all(trunk, acomp);
  detail::merge_flags_all(trunk, bcomp);

  // ---- read-out annotations ----
  const int depth5 = trunk.depth();
  auto put_tap = [&](const std::string& name, int layer, const Mat& outmap, Mat sel) {
    AffineTap t;
    t.layer = layer;
    t.map = melt(sel, outmap);
    trunk.taps[name] = std::move(t);
  };
  for (int j = 0; j < d; ++j) {
    Mat sel(1, nA + 1);
    sel.at(0, 1 + j) = 1.0L;
    put_tap("phi11." + std::to_string(j), 2, Aout, std::move(sel));
  }
  for (int t = 0; t < d; ++t) {
    Mat sel(1, nA + 1);
    for (long long k = 0; k < Md; ++k) sel.at(0, 1 + d + k) = corners[k][t];
    put_tap("phi21." + std::to_string(t), 2, Aout, std::move(sel));
  }
  if (cfg.stage_b && cfg.deriv_channels)
    for (long long s = 0; s < Md; ++s)
      for (int i = 0; i < B; ++i) {
        Mat sel(1, nA + 1);
        for (long long k = 0; k < Md; ++k) {
          std::vector<ld> pt = corners[k];
          for (int j = 0; j < d; ++j) pt[j] += offs[s][j];
          sel.at(0, 1 + d + k) = P.f.derivative(idx[i], pt);
        }
        put_tap("phi31." + std::to_string(s) + "." + std::to_string(i), 2, Aout,
                std::move(sel));
      }
  if (cfg.check_bank) {
    Mat sel(1, nA + 1);
    sel.at(0, 0) = 1.0L;
    for (long long k = 0; k < Md; ++k) sel.at(0, 1 + d + Md + k) = -1.0L;
    put_tap("fhat1", 2, Aout, std::move(sel));
  }
  const Mat Tout = trunk.layers.back();
  if (cfg.stage_b) {
    for (int j = 0; j < d; ++j) {
      Mat sel(1, L.n5 + 1);
      sel.at(0, 1 + L.phi12 + j) = 1.0L;
      put_tap("phi12." + std::to_string(j), depth5, Tout, std::move(sel));
    }
    for (int t = 0; t < d; ++t) {
      Mat sel(1, L.n5 + 1);
      for (long long s = 0; s < Md; ++s) sel.at(0, 1 + L.coord + s * d + t) = 1.0L;
      put_tap("phi22." + std::to_string(t), depth5, Tout, std::move(sel));
    }
    if (cfg.deriv_channels)
      for (int i = 0; i < B; ++i) {
        Mat sel(1, L.n5 + 1);
        for (long long s = 0; s < Md; ++s) sel.at(0, 1 + L.deriv + s * B + i) = 1.0L;
        put_tap("phi32." + std::to_string(i), depth5, Tout, std::move(sel));
      }
  }
  if (cfg.check_bank) {
    Mat sel(1, L.n5 + 1);
    sel.at(0, 0) = 1.0L;
    for (long long s = 0; s < Md; ++s) sel.at(0, 1 + L.win + s) = -1.0L;
    put_tap("fhat2", depth5, Tout, std::move(sel));
    Mat gsel(1, L.n5 + 1);
    gsel.at(0, 1 + L.ghat) = 1.0L;
    put_tap("ghat1", depth5, Tout, std::move(gsel));
  }

  return {std::move(trunk), L};
}

// ---------------------------------------------------------------------------
// Output heads over the trunk's read-out space.

// Taylor-polynomial head: p(z, y) = sum_i y_i z^{l_i} / l_i! with
// z = refined point - window sum and y_i the derivative-channel sums.
inline Network head_polynomial(const BuildParams& P, const TrunkLayout& L) {
  const auto idx = multi_indices(P.d, P.q);
  const int B = static_cast<int>(idx.size());
  const int d = P.d;
  if (P.q == 0) {
    Mat m(1, L.n5 + 1);
    for (long long s = 0; s < P.Md; ++s) m.at(0, 1 + L.deriv + s * B) = 1.0L;
    return detail::affine_net(std::move(m));
  }
  Mat pre(d + B, L.n5 + 1);
  for (int j = 0; j < d; ++j) {
    pre.at(j, 1 + L.phi12 + j) = 1.0L;
    for (long long s = 0; s < P.Md; ++s) pre.at(j, 1 + L.coord + s * d + j) = -1.0L;
  }
  for (int i = 0; i < B; ++i)
    for (long long s = 0; s < P.Md; ++s) pre.at(d + i, 1 + L.deriv + s * B + i) = 1.0L;
  std::vector<std::pair<std::vector<int>, ld>> terms;
  terms.reserve(idx.size());
  for (const auto& k : idx) terms.push_back({k, 1.0L / multi_factorial(k)});
  Network poly =
      polynomial_net(d, P.q, terms, BlockAccuracy::with_R(P.R_p, P.poly_range));
  Network head = compose(poly, detail::affine_net(std::move(pre)));
  head.flags = poly.flags;
  return head;
}

// Boundary gate: a single steep unit reading the window badness and the cubed
// strip badness, optionally followed by synchronizing identity steps.
inline Network head_gate(const BuildParams& P, const TrunkLayout& L, int sync_steps) {
  Mat g(1, L.n5 + 1);
  g.at(0, 0) = P.B1_gate / 2.0L;
  for (long long s = 0; s < P.Md; ++s) g.at(0, 1 + L.win + s) = -P.B1_gate;
  g.at(0, 1 + L.ghat) = P.B1_gate * P.B2_gate;
  Network gate;
  gate.input_dim = L.n5;
  Mat out(1, 2);
  out.at(0, 1) = 1.0L;
  gate.layers = {std::move(g), std::move(out)};
  if (sync_steps > 0) {
    // Saturating relays hold the gate value at its rails while later head
    // stages line up, and keep the read-out a selector row.
    Network rg;
    rg.input_dim = 1;
    for (int s = 0; s < sync_steps; ++s) {
      Mat step(1, 2);
      step.at(0, 0) = -P.B1_gate / 2.0L;
      step.at(0, 1) = P.B1_gate;
      rg.layers.push_back(std::move(step));
    }
    Mat rout(1, 2);
    rout.at(0, 1) = 1.0L;
    rg.layers.push_back(std::move(rout));
    gate = compose(rg, gate);
  }
  return gate;
}

// Clipping head: value head minus a steep suppression ramp, passed through a
// positive/negative rectifier pair.  For q = 0 the suppression signal is the
// raw badness sum; otherwise it is the synchronized gate output.
inline Network head_clipped(const BuildParams& P, const TrunkLayout& L) {
  Network relu = relu_net(BlockAccuracy::with_R(P.clip_R, P.clip_range));
  Network r0 = remap_inputs(relu, 2, {0});
  Network r1 = remap_inputs(relu, 2, {1});
  Network rp = parallelize({&r0, &r1});
  rp.taps.clear();
  Mat combo(1, 3);
  combo.at(0, 1) = 1.0L;
  combo.at(0, 2) = -1.0L;

  Network head;
  if (P.q == 0) {
    // suppression = windows badness + Md * cubed strip badness, in trunk space
    Mat pre(2, L.n5 + 1);
    Mat fhat(1, L.n5 + 1);
    for (long long s = 0; s < P.Md; ++s) fhat.at(0, 1 + L.deriv + s) = 1.0L;
    const ld c = 4.0L * P.B_true;
    for (int r = 0; r < 2; ++r) {
      const ld sgn = (r == 0) ? 1.0L : -1.0L;
      pre.at(r, 0) = sgn * fhat.at(0, 0) - c;  // badness bias term: 1
      for (int j = 1; j <= L.n5; ++j) pre.at(r, j) = sgn * fhat.at(0, j);
      for (long long s = 0; s < P.Md; ++s) pre.at(r, 1 + L.win + s) += c;
      pre.at(r, 1 + L.ghat) += -c * P.B2_gate;
    }
    head = compose(rp, detail::affine_net(std::move(pre)));
  } else {
    Network fp = head_polynomial(P, L);
    Network gate = head_gate(P, L, P.kappa - 1);
    Network par = parallelize({&fp, &gate});
    par.taps.clear();
    Mat pre(2, 3);
    pre.at(0, 1) = 1.0L;
    pre.at(0, 2) = -2.0L * P.B_true;
    pre.at(1, 1) = -1.0L;
    pre.at(1, 2) = -2.0L * P.B_true;
    head = compose(compose(rp, detail::affine_net(std::move(pre))), par);
    merge_flags(head, {&fp});
  }
  return compose(detail::affine_net(std::move(combo)), head);
}

// Hat-weight head: three rectifier units per coordinate form a unit tent over
// the fine cell in normalized displacement, multiplied across coordinates.
inline Network head_weight(const BuildParams& P, const TrunkLayout& L, int sync_steps) {
  const int d = P.d;
  if (d > 2)
    throw std::invalid_argument("head_weight: implemented for d <= 2");
  Mat pre(3 * d, L.n5 + 1);
  for (int j = 0; j < d; ++j)
    for (int c = 0; c < 3; ++c) {
      const int r = 3 * j + c;
      pre.at(r, 0) = -static_cast<ld>(c);
      pre.at(r, 1 + L.phi12 + j) = P.z_scale;
      for (long long s = 0; s < P.Md; ++s)
        pre.at(r, 1 + L.coord + s * d + j) = -P.z_scale;
    }
  Network relu = relu_net(BlockAccuracy::with_R(P.w_R, P.w_range));
  std::vector<Network> units;
  units.reserve(3 * d);
  for (int r = 0; r < 3 * d; ++r) units.push_back(remap_inputs(relu, 3 * d, {r}));
  std::vector<const Network*> uptr;
  for (auto& u : units) uptr.push_back(&u);
  Network rp = parallelize(uptr);
  rp.taps.clear();

  Mat combo(d, 3 * d + 1);
  for (int j = 0; j < d; ++j) {
    combo.at(j, 1 + 3 * j) = 1.0L;
    combo.at(j, 1 + 3 * j + 1) = -2.0L;
    combo.at(j, 1 + 3 * j + 2) = 1.0L;
  }
  Network head = compose(compose(detail::affine_net(std::move(combo)), rp),
                         detail::affine_net(std::move(pre)));
  if (d == 2)
    head = compose(product_net(BlockAccuracy::with_R(P.w_tree_R, 2.0L)), head);
  if (sync_steps > 0) {
    // The synchronizing relay feeds the final product stage, so it runs at
    // that stage's stored scale; the fold of its read-out into the anchored
    // second differences is then exact.
    head = compose(identity_chain(pow2ceil(P.mult_R), sync_steps), head);
  }
  return head;
}

// ---------------------------------------------------------------------------
// Published builders.

namespace detail {
inline long long width_two_scale(const BuildParams& P) {
  const long long r2 = (P.B + P.d) * P.Md * (2 + 2 * P.d) + P.d;
  return std::max(r2, 4LL * (P.q + 1) * P.B);
}
inline void stamp(Network& n, const BuildParams& P, const std::string& builder,
                  long long depth, long long width) {
  n.builder = builder;
  n.claimed_depth = static_cast<int>(depth);
  n.claimed_width = static_cast<int>(width);
  n.params["M"] = static_cast<ld>(P.M);
  n.params["d"] = static_cast<ld>(P.d);
  n.params["q"] = static_cast<ld>(P.q);
  n.params["p"] = P.p;
  n.params["a"] = P.a;
  n.params["boost"] = P.boost;
  n.params["cq_norm"] = P.cq;
  n.params["sup_norm"] = P.supn;
  n.params["claim_depth"] = static_cast<ld>(depth);
  n.params["claim_width"] = static_cast<ld>(width);
  for (const auto& w : P.warnings) {
    bool seen = false;
    for (const auto& g : n.flags) seen = seen || (g == w);
    if (!seen) n.flags.push_back(w);
  }
  n.check();
}
}  // namespace detail

// Piecewise Taylor value network: depth 5 + ceil(log2(q+1)).
inline Network build_net_p2(const SmoothFunction& f, int M, ld boost = 1.0L) {
  BuildParams P = derive_params(f, M, boost, false);
  GridPartition coarse(P.a, M, Level::coarse, P.d);
  GridPartition fine(P.a, M, Level::fine, P.d);
  TrunkNet T = build_trunk(P, coarse, fine, {true, true, false});
  Network head = head_polynomial(P, T.layout);
  Network n = compose(head, T.net);
  merge_flags(n, {&T.net, &head});
  detail::stamp(n, P, "two_scale", 5 + P.kappa, detail::width_two_scale(P));
  n.params["claim_sup"] =
      std::pow(P.range_norm, 5.0L * P.q + 3.0L) / P.M2p / boost;
  return n;
}

// Tensor-product hat weight network: depth 7 + ceil(log2(d)).
inline Network build_w_net(const SmoothFunction& f, int M, ld boost = 1.0L,
                           const std::vector<int>& mask = {}) {
  BuildParams P = derive_params(f, M, boost, false);
  std::vector<int> m = mask.empty() ? std::vector<int>(P.d, 0) : mask;
  GridPartition coarse = shifted_partition(P.a, M, P.d, Level::coarse, m);
  GridPartition fine = shifted_partition(P.a, M, P.d, Level::fine, m);
  TrunkNet T = build_trunk(P, coarse, fine, {true, false, false});
  Network head = head_weight(P, T.layout, 0);
  Network n = compose(head, T.net);
  merge_flags(n, {&T.net, &head});
  const long long width =
      std::max<long long>(12 * P.d, 2 * P.d + P.Md * P.d * (2 + 2 * P.d));
  detail::stamp(n, P, "weight", 7 + P.logd, width);
  n.params["claim_sup"] =
      std::max<ld>(std::pow(2.0L, P.d), 12.0L * P.d) / P.M2p / boost;
  return n;
}

// Boundary-strip detector: depth 6; near one on the strip skeleton, near zero
// on shrunken cell interiors.
inline Network build_check_net(const SmoothFunction& f, int M, ld boost = 1.0L) {
  BuildParams P = derive_params(f, M, boost, false);
  GridPartition coarse(P.a, M, Level::coarse, P.d);
  GridPartition fine(P.a, M, Level::fine, P.d);
  TrunkNet T = build_trunk(P, coarse, fine, {false, false, true});
  Network head = head_gate(P, T.layout, 0);
  Network n = compose(head, T.net);
  merge_flags(n, {&T.net});
  const long long width = (2 * P.d + 2) * P.d * P.Md + P.d;
  detail::stamp(n, P, "boundary_check", 6, width);
  n.params["claim_sup"] = 1.0L / (P.M2p2 * boost);
  return n;
}

// Clipped Taylor value network: depth 7 + ceil(log2(q+1)); suppressed on the
// boundary strips, accurate on shrunken cell interiors.
inline Network build_net_p2_true(const SmoothFunction& f, int M, ld boost = 1.0L,
                                 const std::vector<int>& mask = {}) {
  BuildParams P = derive_params(f, M, boost, true);
  std::vector<int> m = mask.empty() ? std::vector<int>(P.d, 0) : mask;
  GridPartition coarse = shifted_partition(P.a, M, P.d, Level::coarse, m);
  GridPartition fine = shifted_partition(P.a, M, P.d, Level::fine, m);
  TrunkNet T = build_trunk(P, coarse, fine, {true, true, true});
  Network head = head_clipped(P, T.layout);
  Network n = compose(head, T.net);
  merge_flags(n, {&T.net, &head});
  const long long width = detail::width_two_scale(P) + P.Md * (2 * P.d + 2);
  detail::stamp(n, P, "clipped_two_scale", 7 + P.kappa, width);
  if (M < 3) n.flags.push_back("resolution-below-minimum-3");
  n.params["claim_sup"] =
      2.0L * std::pow(P.range_norm, 5.0L * P.q + 3.0L) / P.M2p / boost;
  n.params["claim_strip"] = 1.0L / P.M2p2;
  n.params["B_true"] = P.B_true;
  return n;
}

// Weight-times-clipped-value network for one shifted grid copy:
// depth 8 + ceil(log2(max{d, q+1})).
inline Network build_net_partition(const SmoothFunction& f, int M,
                                   const std::vector<int>& mask, ld boost = 1.0L) {
  BuildParams P = derive_params(f, M, boost, true);
  std::vector<int> m = mask.empty() ? std::vector<int>(P.d, 0) : mask;
  if (static_cast<int>(m.size()) != P.d)
    throw std::invalid_argument("build_net_partition: mask size mismatch");
  GridPartition coarse = shifted_partition(P.a, M, P.d, Level::coarse, m);
  GridPartition fine = shifted_partition(P.a, M, P.d, Level::fine, m);
  TrunkNet T = build_trunk(P, coarse, fine, {true, true, true});

  const int t1 = std::max(P.kappa - P.logd, 0);  // weight-side alignment
  const int t2 = std::max(P.logd - P.kappa, 0);  // value-side alignment
  Network wb = head_weight(P, T.layout, t1);
  Network tb = head_clipped(P, T.layout);
  if (t2 > 0) {
    // Runs at the final product stage's stored scale for the same exact-fold
    // reason as the weight-side relay.
    tb = compose(identity_chain(pow2ceil(P.mult_R), t2), tb);
  }
  Network par = parallelize({&wb, &tb});
  par.taps.clear();
  Network prod = product_net(BlockAccuracy::with_R(P.mult_R, P.mult_range));
  Network n = compose(compose(prod, par), T.net);
  merge_flags(n, {&T.net, &wb, &tb});
  const long long width =
      detail::width_two_scale(P) + P.Md * (2 * P.d + 2) + 12 * P.d;
  const long long depth = 8 + std::max(P.kappa, P.logd);
  detail::stamp(n, P, "windowed_product", depth, width);
  if (M < 3) n.flags.push_back("resolution-below-minimum-3");
  // Accuracy constant: local polynomial error plus the face bands where the
  // value factor is suppressed but the weight factor is itself O(M^{-2p}).
  n.params["claim_sup"] =
      (std::pow(P.range_norm, 5.0L * P.q + 3.0L) + 2.0L * (P.supn + 1.0L)) /
      P.M2p / boost;
  n.params["B_true"] = P.B_true;
  for (int j = 0; j < P.d; ++j)
    n.params["mask" + std::to_string(j)] = static_cast<ld>(m[j]);
  return n;
}

// Final approximant: the sum of all 2^d shifted weight-times-value copies.
// Accuracy is certified on [-a/2, a/2]^d.
inline Network build_theorem1(const SmoothFunction& f, int M, ld boost = 1.0L) {
  BuildParams P = derive_params(f, M, boost, true);
  std::vector<Network> copies;
  copies.reserve(1LL << P.d);
  for (int maskbits = 0; maskbits < (1 << P.d); ++maskbits) {
    std::vector<int> m(P.d, 0);
    for (int j = 0; j < P.d; ++j) m[j] = (maskbits >> j) & 1;
    copies.push_back(build_net_partition(f, M, m, boost));
  }
  std::vector<const Network*> cptr;
  std::vector<ld> coeffs(copies.size(), 1.0L);
  for (auto& c : copies) cptr.push_back(&c);
  Network n = affine_combination(cptr, coeffs, 0.0L);
  detail::merge_flags_all(n, copies);
  const long long depth = 8 + std::max(P.kappa, P.logd);
  const long long width =
      (1LL << P.d) *
      (detail::width_two_scale(P) + P.Md * (2 * P.d + 2) + 12 * P.d);
  detail::stamp(n, P, "shifted_sum", depth, width);
  n.params["claim_sup"] =
      std::pow(2.0L, P.d) *
      (std::pow(P.range_norm, 5.0L * P.q + 3.0L) + 2.0L * (P.supn + 1.0L)) /
      P.M2p / boost;
  n.params["claim_alpha"] = detail::checked_scale(
      std::pow(std::max(P.range_norm, 1.0L), 12.0L) *
          std::exp(6.0L * std::pow(2.0L, 2.0L * (P.d + 1) + 1.0L) * P.a * P.d) *
          std::pow(static_cast<ld>(M), 10.0L * P.p + 2.0L * P.d + 10.0L),
      "weight envelope");
  n.params["claim_params"] =
      static_cast<ld>(dense_param_count(depth, width, P.d));
  n.params["cert_lo"] = -P.a / 2.0L;
  n.params["cert_hi"] = P.a / 2.0L;
  return n;
}

}  // namespace signet
