#pragma once
// Equivolume half-open cube partitions of [-a + shift, a + shift)^d at two
// nesting resolutions, the within-cube offset vectors, the 2^d per-coordinate
// shifted copies, and the tensor-product hat weight.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "signet/scalar.hpp"

namespace signet {

enum class Level { coarse, fine };

// 1-based flat cube index (first coordinate most significant).
struct CubeRef {
  long long index = 0;
  std::vector<int> axis;  // per-axis cell index, 0-based
};

struct GridPartition {
  ld a = 1.0L;
  int M = 2;
  Level level = Level::coarse;
  int d = 1;
  std::vector<ld> shift;  // per-coordinate, entries in {0, a/M^2}

  GridPartition() = default;
  GridPartition(ld a_, int M_, Level lv, int d_, std::vector<ld> shift_ = {})
      : a(a_), M(M_), level(lv), d(d_), shift(std::move(shift_)) {
    if (shift.empty()) shift.assign(d, 0.0L);
    if (static_cast<int>(shift.size()) != d)
      throw std::invalid_argument("shift dimension mismatch");
  }

  int cells_per_axis() const { return level == Level::coarse ? M : M * M; }
  ld side() const { return 2 * a / cells_per_axis(); }
  long long cube_count() const {
    long long n = 1;
    for (int j = 0; j < d; ++j) n *= cells_per_axis();
    return n;
  }
  ld low(int j) const { return -a + shift[j]; }
  ld high(int j) const { return a + shift[j]; }

  bool contains_point(const std::vector<ld>& x) const {
    for (int j = 0; j < d; ++j)
      if (x[j] < low(j) || x[j] >= high(j)) return false;
    return true;
  }

  CubeRef locate(const std::vector<ld>& x) const {
    if (!contains_point(x)) throw std::domain_error("locate: point outside domain");
    const int n = cells_per_axis();
    CubeRef ref;
    ref.axis.resize(d);
    ref.index = 1;
    for (int j = 0; j < d; ++j) {
      int c = static_cast<int>(std::floor((x[j] - low(j)) / side()));
      c = std::min(std::max(c, 0), n - 1);
      // Guard the floating floor at cell boundaries (half-open convention).
      if (x[j] >= low(j) + (c + 1) * side()) ++c;
      if (x[j] < low(j) + c * side()) --c;
      ref.axis[j] = c;
    }
    ref.index = flat_index(ref.axis);
    return ref;
  }

  long long flat_index(const std::vector<int>& axis) const {
    const int n = cells_per_axis();
    long long idx = 0;
    for (int j = 0; j < d; ++j) idx = idx * n + axis[j];
    return idx + 1;
  }

  std::vector<int> axis_of(long long flat) const {
    const int n = cells_per_axis();
    std::vector<int> axis(d);
    long long rem = flat - 1;
    for (int j = d - 1; j >= 0; --j) {
      axis[j] = static_cast<int>(rem % n);
      rem /= n;
    }
    return axis;
  }

  std::vector<ld> corner(const CubeRef& ref) const {
    std::vector<ld> c(d);
    for (int j = 0; j < d; ++j) c[j] = low(j) + ref.axis[j] * side();
    return c;
  }
  std::vector<ld> corner(long long flat) const {
    CubeRef r;
    r.index = flat;
    r.axis = axis_of(flat);
    return corner(r);
  }
  std::vector<ld> center(long long flat) const {
    auto c = corner(flat);
    for (auto& v : c) v += side() / 2;
    return c;
  }

  // Distance from x to the boundary of the cube containing it (negative when
  // outside the domain).  x is in the delta-shrunken interior of its cube
  // exactly when this exceeds delta.
  ld interior_distance(const std::vector<ld>& x) const {
    const CubeRef ref = locate(x);
    const auto c = corner(ref);
    ld dist = side();
    for (int j = 0; j < d; ++j) {
      dist = std::min(dist, x[j] - c[j]);
      dist = std::min(dist, c[j] + side() - x[j]);
    }
    return dist;
  }
};

// The M^d within-coarse-cube offsets of the fine grid, enumerated to match the
// flat cube indexing (first coordinate most significant): entries from
// {0, h, ..., (M-1)h}^d with h = 2a/M^2.
inline std::vector<std::vector<ld>> offset_vectors(ld a, int M, int d) {
  const ld h = 2 * a / (static_cast<ld>(M) * M);
  long long total = 1;
  for (int j = 0; j < d; ++j) total *= M;
  std::vector<std::vector<ld>> vs;
  vs.reserve(total);
  for (long long s = 0; s < total; ++s) {
    std::vector<ld> v(d);
    long long rem = s;
    for (int j = d - 1; j >= 0; --j) {
      v[j] = (rem % M) * h;
      rem /= M;
    }
    vs.push_back(std::move(v));
  }
  return vs;
}

// All 2^d per-coordinate shifted partitions (shift magnitude a/M^2, applied
// jointly at both levels so nesting is preserved); element 0 is unshifted.
inline std::vector<GridPartition> shifted_partitions(ld a, int M, int d, Level lv) {
  const ld h = a / (static_cast<ld>(M) * M);
  std::vector<GridPartition> ps;
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::vector<ld> shift(d, 0.0L);
    for (int j = 0; j < d; ++j)
      if (mask >> j & 1) shift[j] = h;
    ps.emplace_back(a, M, lv, d, shift);
  }
  return ps;
}

inline GridPartition shifted_partition(ld a, int M, int d, Level lv,
                                       const std::vector<int>& mask) {
  const ld h = a / (static_cast<ld>(M) * M);
  std::vector<ld> shift(d, 0.0L);
  for (int j = 0; j < d; ++j)
    if (mask[j]) shift[j] = h;
  return GridPartition(a, M, lv, d, shift);
}

// Tensor-product hat weight of the fine partition: peaks at the center of the
// fine cube containing x, vanishes on every fine-cube face; the 2^d shifted
// copies sum to one away from the outer boundary.
inline ld bspline_weight(const GridPartition& fine, const std::vector<ld>& x) {
  if (fine.level != Level::fine) throw std::invalid_argument("needs the fine level");
  if (!fine.contains_point(x)) return 0.0L;
  const auto c = fine.corner(fine.locate(x));
  const ld h = fine.side() / 2;  // = a/M^2
  ld w = 1.0L;
  for (int j = 0; j < fine.d; ++j) {
    const ld t = 1.0L - std::fabs(c[j] + h - x[j]) / h;
    w *= std::max(t, 0.0L);
  }
  return w;
}

}  // namespace signet
