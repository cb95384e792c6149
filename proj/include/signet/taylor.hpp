#pragma once
// Exact-arithmetic reference values for the two-scale piecewise Taylor
// construction: multi-index enumeration, the staged value recursion that the
// assembled networks imitate, and the direct piecewise Taylor polynomial the
// recursion must reproduce.

#include <vector>

#include "signet/functions.hpp"
#include "signet/partition.hpp"

namespace signet {

// All d-dimensional multi-indices of total order <= q, graded
// (degree-by-degree), lexicographic within a degree.  Count = binom(d+q, d).
inline std::vector<std::vector<int>> multi_indices(int d, int q) {
  return detail::derivative_orders(d, q);
}

inline long long binom(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline ld multi_factorial(const std::vector<int>& k) {
  ld f = 1;
  for (int v : k)
    for (int i = 2; i <= v; ++i) f *= i;
  return f;
}

inline ld power_multi(const std::vector<ld>& z, const std::vector<int>& k) {
  ld p = 1;
  for (size_t j = 0; j < z.size(); ++j)
    for (int i = 0; i < k[j]; ++i) p *= z[j];
  return p;
}

// The staged values of the two-scale recursion at a point x.
struct PhiState {
  std::vector<ld> x;
  long long coarse_index = 0;  // 1-based coarse cube
  long long offset_index = 0;  // 1-based fine offset within the coarse cube
  std::vector<ld> phi11;                    // stage 1: the point itself
  std::vector<ld> phi21;                    // stage 1: coarse corner
  std::vector<std::vector<ld>> phi31;       // stage 1: [offset s][index i] coefficients
  std::vector<ld> phi12;                    // stage 2: the point again
  std::vector<ld> phi22;                    // stage 2: fine corner
  std::vector<ld> phi32;                    // stage 2: selected coefficients
  ld phi13 = 0;                             // stage 3: Taylor value
};

// Runs the recursion on exact oracle values.  `coarse` and `fine` must be the
// jointly shifted pair.
inline PhiState phi_recursion(const SmoothFunction& f, const GridPartition& coarse,
                              const GridPartition& fine, int q,
                              const std::vector<ld>& x) {
  const int d = f.d, M = coarse.M;
  const auto idx = multi_indices(d, q);
  const auto offsets = offset_vectors(coarse.a, M, d);

  PhiState st;
  st.x = x;
  st.phi11 = x;
  const CubeRef cref = coarse.locate(x);
  st.coarse_index = cref.index;
  st.phi21 = coarse.corner(cref);

  st.phi31.assign(offsets.size(), std::vector<ld>(idx.size()));
  for (size_t s = 0; s < offsets.size(); ++s) {
    std::vector<ld> corner_s(d);
    for (int j = 0; j < d; ++j) corner_s[j] = st.phi21[j] + offsets[s][j];
    for (size_t i = 0; i < idx.size(); ++i)
      st.phi31[s][i] = f.derivative(idx[i], corner_s);
  }

  st.phi12 = st.phi11;
  const CubeRef fref = fine.locate(x);
  st.phi22 = fine.corner(fref);

  // Offset of the fine cube within its coarse cube, flat, matching
  // offset_vectors' enumeration.
  long long off = 0;
  for (int j = 0; j < d; ++j) {
    const int rel = fref.axis[j] - M * cref.axis[j];
    off = off * M + rel;
  }
  st.offset_index = off + 1;

  st.phi32 = st.phi31[off];

  std::vector<ld> disp(d);
  for (int j = 0; j < d; ++j) disp[j] = st.phi12[j] - st.phi22[j];
  st.phi13 = 0;
  for (size_t i = 0; i < idx.size(); ++i)
    st.phi13 += st.phi32[i] / multi_factorial(idx[i]) * power_multi(disp, idx[i]);
  return st;
}

// Direct piecewise Taylor polynomial of order q anchored at the corner of the
// fine cube containing x.
inline ld piecewise_taylor(const SmoothFunction& f, const GridPartition& fine, int q,
                           const std::vector<ld>& x) {
  const auto idx = multi_indices(f.d, q);
  const auto corner = fine.corner(fine.locate(x));
  std::vector<ld> disp(f.d);
  for (int j = 0; j < f.d; ++j) disp[j] = x[j] - corner[j];
  ld v = 0;
  for (const auto& k : idx)
    v += f.derivative(k, corner) / multi_factorial(k) * power_multi(disp, k);
  return v;
}

}  // namespace signet
