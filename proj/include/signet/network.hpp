#pragma once
// Dense sigmoid networks as explicit coefficient matrices, plus the closure
// operations (compose / parallelize / affine combinations) used to assemble
// larger networks from primitive ones.
//
// A network with L hidden layers is stored as L+1 matrices.  Column 0 of every
// matrix is the bias column: layer s maps [1; h_s] to the pre-activations of
// layer s+1.  Matrices 0..L-1 are followed by the sigmoid; the last matrix is
// a pure affine read-out.  L = 0 means a standalone affine map.  Published
// networks are scalar-valued; multi-output networks arise internally as
// parallel banks feeding later layers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "signet/scalar.hpp"
#include "signet/sigmoid.hpp"

namespace signet {

struct Mat {
  int rows = 0, cols = 0;
  std::vector<ld> a;  // row-major, size rows*cols

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0L) {}
  ld& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  ld at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

// A named read-out: value = map * [1; h_layer], where h_layer is the
// activation vector of hidden layer `layer` (layer 0 = the network input).
// Lets tests read internal quantities without changing evaluation semantics.
struct AffineTap {
  int layer = 0;
  Mat map;
};

struct Network {
  int input_dim = 0;
  std::vector<Mat> layers;              // size L+1
  std::string builder;                  // which construction produced it
  std::map<std::string, ld> params;     // every scaling/gain value used
  std::vector<std::string> flags;       // warnings attached at build time
  std::map<std::string, AffineTap> taps;
  // Architecture the construction claims membership of (depth is exact,
  // realized hidden widths never exceed claimed_width).  -1 when unset.
  long long claimed_depth = -1;
  long long claimed_width = -1;

  int depth() const { return static_cast<int>(layers.size()) - 1; }
  int out_rows() const { return layers.back().rows; }

  std::vector<int> hidden_widths() const {
    std::vector<int> w;
    for (int s = 0; s + 1 < static_cast<int>(layers.size()); ++s)
      w.push_back(layers[s].rows);
    return w;
  }
  int max_hidden_width() const {
    int m = 0;
    for (int w : hidden_widths()) m = std::max(m, w);
    return m;
  }

  // Verifies the matrix chain is consistent; throws on violation.
  void check() const {
    if (layers.empty()) throw std::logic_error("network has no layers");
    if (layers.front().cols != input_dim + 1)
      throw std::logic_error("first layer does not match input_dim");
    for (size_t s = 1; s < layers.size(); ++s)
      if (layers[s].cols != layers[s - 1].rows + 1)
        throw std::logic_error("layer " + std::to_string(s) + " shape mismatch");
    for (const auto& [name, tap] : taps) {
      const int k = tap.layer == 0 ? input_dim : layers[tap.layer - 1].rows;
      if (tap.layer < 0 || tap.layer > depth() || tap.map.cols != k + 1)
        throw std::logic_error("tap '" + name + "' malformed");
    }
  }

  ld max_abs_weight() const {
    ld m = 0;
    for (const auto& M : layers)
      for (ld v : M.a) m = std::max(m, std::fabs(v));
    return m;
  }

  // Total stored coefficient count (bias columns included, zeros included).
  long long param_count() const {
    long long n = 0;
    for (const auto& M : layers) n += static_cast<long long>(M.rows) * M.cols;
    return n;
  }
};

// Coefficient count of the dense width-r template with L hidden layers,
// d inputs and one output.
inline long long dense_param_count(long long L, long long r, long long d) {
  if (L == 0) return d + 1;
  return (d + 1) * r + (L - 1) * r * (r + 1) + (r + 1);
}

// ---------------------------------------------------------------------------
// Evaluation

// The network's coefficients converted once to the evaluation scalar.
template <class T>
struct TypedNet {
  int input_dim = 0;
  std::vector<int> rows, cols;
  std::vector<std::vector<T>> w;  // row-major per layer
};

template <class T>
TypedNet<T> make_typed(const Network& net) {
  TypedNet<T> t;
  t.input_dim = net.input_dim;
  for (const auto& M : net.layers) {
    t.rows.push_back(M.rows);
    t.cols.push_back(M.cols);
    std::vector<T> m(M.a.size());
    for (size_t i = 0; i < M.a.size(); ++i) m[i] = static_cast<T>(M.a[i]);
    t.w.push_back(std::move(m));
  }
  return t;
}

// Forward pass returning every activation vector: h[0] is the input, h[s] the
// activations of hidden layer s, h[L+... last entry the affine outputs.
template <class T>
std::vector<std::vector<T>> forward_all(const TypedNet<T>& net,
                                        const std::vector<T>& x) {
  const int L = static_cast<int>(net.w.size()) - 1;
  std::vector<std::vector<T>> h(L + 2);
  h[0] = x;
  for (int s = 0; s <= L; ++s) {
    const std::vector<T>& in = h[s];
    std::vector<T> out(net.rows[s]);
    for (int i = 0; i < net.rows[s]; ++i) {
      T z = net.w[s][static_cast<size_t>(i) * net.cols[s]];
      for (int j = 0; j + 1 < net.cols[s]; ++j)
        z += net.w[s][static_cast<size_t>(i) * net.cols[s] + j + 1] * in[j];
      out[i] = (s < L) ? sigmoid(z) : z;
    }
    h[s + 1] = std::move(out);
  }
  return h;
}

template <class T>
std::vector<T> forward(const TypedNet<T>& net, const std::vector<T>& x) {
  const int L = static_cast<int>(net.w.size()) - 1;
  std::vector<T> cur = x, nxt;
  for (int s = 0; s <= L; ++s) {
    nxt.assign(net.rows[s], T(0));
    for (int i = 0; i < net.rows[s]; ++i) {
      T z = net.w[s][static_cast<size_t>(i) * net.cols[s]];
      for (int j = 0; j + 1 < net.cols[s]; ++j)
        z += net.w[s][static_cast<size_t>(i) * net.cols[s] + j + 1] * cur[j];
      nxt[i] = (s < L) ? sigmoid(z) : z;
    }
    cur.swap(nxt);
  }
  return cur;
}

// Convenience scalar evaluation on the long double path.
inline ld eval1(const Network& net, const std::vector<ld>& x) {
  return forward(make_typed<ld>(net), x)[0];
}

template <class T>
T tap_value(const AffineTap& tap, const std::vector<std::vector<T>>& h, int row = 0) {
  const std::vector<T>& in = h[tap.layer];
  T z = T(static_cast<ld>(tap.map.at(row, 0)));
  for (int j = 0; j + 1 < tap.map.cols; ++j)
    z += T(static_cast<ld>(tap.map.at(row, j + 1))) * in[j];
  return z;
}

// ---------------------------------------------------------------------------
// Network algebra

// melt(A, B): the affine map A applied after the affine map B, as one matrix.
inline Mat melt(const Mat& A, const Mat& B) {
  if (A.cols != B.rows + 1) throw std::logic_error("melt: shape mismatch");
  Mat R(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i) {
    R.at(i, 0) = A.at(i, 0);
    for (int j = 0; j < B.rows; ++j) {
      const ld aij = A.at(i, j + 1);
      if (aij == 0.0L) continue;
      R.at(i, 0) += aij * B.at(j, 0);
      for (int c = 1; c < B.cols; ++c) R.at(i, c) += aij * B.at(j, c);
    }
  }
  return R;
}

// outer(inner(x)): depth adds; the inner read-out melts into the outer first
// layer.  Inner taps are kept; outer taps on hidden layers shift by the inner
// depth; outer taps on its input melt through the inner read-out.
inline Network compose(const Network& outer, const Network& inner) {
  if (outer.input_dim != inner.out_rows())
    throw std::logic_error("compose: inner outputs do not match outer inputs");
  Network r;
  r.input_dim = inner.input_dim;
  const int Li = inner.depth();
  for (int s = 0; s < Li; ++s) r.layers.push_back(inner.layers[s]);
  r.layers.push_back(melt(outer.layers[0], inner.layers[Li]));
  for (size_t s = 1; s < outer.layers.size(); ++s) r.layers.push_back(outer.layers[s]);
  r.taps = inner.taps;
  for (const auto& [name, tap] : outer.taps) {
    AffineTap t = tap;
    if (tap.layer == 0) {
      t.layer = Li;
      t.map = melt(tap.map, inner.layers[Li]);
    } else {
      t.layer += Li;
    }
    r.taps["outer." + name] = std::move(t);
  }
  return r;
}

// Side-by-side bank over a common input: equal depth, widths add, outputs
// concatenate.  Tap names collide-safely via per-net prefixes when given.
inline Network parallelize(const std::vector<const Network*>& nets,
                           const std::vector<std::string>& prefixes = {}) {
  if (nets.empty()) throw std::logic_error("parallelize: no networks");
  const int L = nets[0]->depth(), d = nets[0]->input_dim;
  for (const Network* n : nets)
    if (n->depth() != L || n->input_dim != d)
      throw std::logic_error("parallelize: depth/input mismatch");
  Network r;
  r.input_dim = d;
  for (int s = 0; s <= L; ++s) {
    int rows = 0, prev = (s == 0) ? d : 0;
    if (s > 0)
      for (const Network* n : nets) prev += n->layers[s - 1].rows;
    for (const Network* n : nets) rows += n->layers[s].rows;
    Mat M(rows, prev + 1);
    int ro = 0, co = 0;
    for (const Network* n : nets) {
      const Mat& B = n->layers[s];
      for (int i = 0; i < B.rows; ++i) {
        M.at(ro + i, 0) = B.at(i, 0);
        for (int j = 1; j < B.cols; ++j)
          M.at(ro + i, (s == 0 ? 0 : co) + j) = B.at(i, j);
      }
      ro += B.rows;
      if (s > 0) co += n->layers[s - 1].rows;
    }
    r.layers.push_back(std::move(M));
  }
  // Offset taps into the concatenated activation vectors.
  int idx = 0;
  std::vector<int> layer_off(L + 1, 0);
  for (const Network* n : nets) {
    const std::string pre =
        prefixes.empty() ? ("n" + std::to_string(idx) + ".") : prefixes[idx];
    for (const auto& [name, tap] : n->taps) {
      AffineTap t;
      t.layer = tap.layer;
      const int total =
          (tap.layer == 0) ? d : r.layers[tap.layer - 1].rows;
      t.map = Mat(tap.map.rows, total + 1);
      const int off = (tap.layer == 0) ? 0 : layer_off[tap.layer];
      for (int i = 0; i < tap.map.rows; ++i) {
        t.map.at(i, 0) = tap.map.at(i, 0);
        for (int j = 1; j < tap.map.cols; ++j) t.map.at(i, off + j) = tap.map.at(i, j);
      }
      r.taps[pre + name] = std::move(t);
    }
    for (int s = 1; s <= L; ++s) layer_off[s] += n->layers[s - 1].rows;
    ++idx;
  }
  return r;
}

// sum_i coeff_i * net_i(x) + bias for scalar networks of equal depth.
inline Network affine_combination(const std::vector<const Network*>& nets,
                                  const std::vector<ld>& coeffs, ld bias) {
  if (nets.size() != coeffs.size())
    throw std::logic_error("affine_combination: size mismatch");
  for (const Network* n : nets)
    if (n->out_rows() != 1)
      throw std::logic_error("affine_combination: needs scalar networks");
  Network r = parallelize(nets);
  Mat& last = r.layers.back();
  Mat combo(1, static_cast<int>(nets.size()) + 1);
  combo.at(0, 0) = bias;
  for (size_t i = 0; i < coeffs.size(); ++i) combo.at(0, static_cast<int>(i) + 1) = coeffs[i];
  r.layers.back() = melt(combo, last);
  return r;
}

// Renumbers network inputs into a wider input vector: old input j becomes new
// input index_map[j].
inline Network remap_inputs(const Network& net, int new_dim,
                            const std::vector<int>& index_map) {
  if (static_cast<int>(index_map.size()) != net.input_dim)
    throw std::logic_error("remap_inputs: map size mismatch");
  Network r = net;
  r.input_dim = new_dim;
  const Mat& A = net.layers[0];
  Mat M(A.rows, new_dim + 1);
  for (int i = 0; i < A.rows; ++i) {
    M.at(i, 0) = A.at(i, 0);
    for (int j = 0; j < net.input_dim; ++j) M.at(i, 1 + index_map[j]) = A.at(i, 1 + j);
  }
  r.layers[0] = std::move(M);
  for (auto& [name, tap] : r.taps)
    if (tap.layer == 0) {
      Mat T2(tap.map.rows, new_dim + 1);
      for (int i = 0; i < tap.map.rows; ++i) {
        T2.at(i, 0) = tap.map.at(i, 0);
        for (int j = 0; j < net.input_dim; ++j)
          T2.at(i, 1 + index_map[j]) = tap.map.at(i, 1 + j);
      }
      tap.map = std::move(T2);
    }
  return r;
}

// Pads every hidden layer to width r with dead units (zero in- and out-going
// weights); outputs are identical, only the stored shape changes.
inline Network pad_to_width(const Network& net, int r) {
  Network p = net;
  const int L = p.depth();
  for (int s = 0; s < L; ++s) {
    Mat& M = p.layers[s];
    if (M.rows > r) throw std::logic_error("pad_to_width: width already exceeds r");
    Mat grown(r, M.cols);
    std::copy(M.a.begin(), M.a.end(), grown.a.begin());
    M = std::move(grown);
    Mat& N = p.layers[s + 1];
    Mat wide(N.rows, r + 1);
    for (int i = 0; i < N.rows; ++i)
      for (int j = 0; j < N.cols; ++j) wide.at(i, j) = N.at(i, j);
    N = std::move(wide);
  }
  return p;
}

}  // namespace signet
