#pragma once
// The target-function corpus: smooth functions with exact derivative oracles
// to every order the constructions consume, plus scanned norm helpers.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "signet/scalar.hpp"

namespace signet {

// A smooth target with derivative oracle.  Smoothness is declared as order q
// plus Hoelder exponent s of the q-th derivatives (rate parameter p = q + s),
// with C bounding the corresponding norm on [-2a, 2a]^d.
struct SmoothFunction {
  std::string name;
  int d = 1;
  int q = 0;        // Taylor order used by the constructions
  double s = 1.0;   // Hoelder exponent of the order-q derivatives
  ld C = 1.0L;      // declared smoothness-norm bound
  ld a = 1.0L;      // domain half-width (oracle valid on [-2a, 2a]^d)
  int max_order = 6;
  // derivative(order, x): the mixed partial of multi-order `order` at x.
  std::function<ld(const std::vector<int>&, const std::vector<ld>&)> derivative;

  double p() const { return q + s; }
  ld value(const std::vector<ld>& x) const {
    return derivative(std::vector<int>(d, 0), x);
  }
  SmoothFunction with_smoothness(int q2, double s2) const {
    SmoothFunction f = *this;
    f.q = q2;
    f.s = s2;
    return f;
  }
};

namespace detail {
// k-th derivative of exp(-t^2) via the Hermite three-term recursion.
inline ld gauss_deriv(int k, ld t) {
  ld h0 = 1.0L, h1 = 2 * t;  // physicists' Hermite polynomials
  if (k >= 1)
    for (int n = 1; n < k; ++n) {
      const ld h2 = 2 * t * h1 - 2 * n * h0;
      h0 = h1;
      h1 = h2;
    }
  const ld hk = (k == 0) ? h0 : h1;
  const ld sign = (k % 2 == 0) ? 1.0L : -1.0L;
  return sign * hk * std::exp(-t * t);
}
}  // namespace detail

inline std::vector<SmoothFunction> function_corpus() {
  using std::numbers::pi_v;
  const ld pi = pi_v<long double>;
  std::vector<SmoothFunction> fs;

  {
    SmoothFunction f;
    f.name = "sin";
    f.d = 1; f.q = 0; f.s = 1.0; f.C = 1.0L; f.a = 1.0L; f.max_order = 12;
    f.derivative = [pi](const std::vector<int>& k, const std::vector<ld>& x) {
      return std::sin(x[0] + k[0] * pi / 2);
    };
    fs.push_back(f);
  }
  {
    SmoothFunction f;
    f.name = "coshalfpi";  // cos(pi*x/2)
    f.d = 1; f.q = 0; f.s = 1.0; f.C = pi / 2; f.a = 1.0L; f.max_order = 12;
    f.derivative = [pi](const std::vector<int>& k, const std::vector<ld>& x) {
      return std::pow(pi / 2, k[0]) * std::cos(pi * x[0] / 2 + k[0] * pi / 2);
    };
    fs.push_back(f);
  }
  {
    SmoothFunction f;
    f.name = "expnorm";  // exp(x)/e
    f.d = 1; f.q = 1; f.s = 1.0; f.C = std::exp(1.0L); f.a = 1.0L; f.max_order = 12;
    f.derivative = [](const std::vector<int>&, const std::vector<ld>& x) {
      return std::exp(x[0] - 1.0L);
    };
    fs.push_back(f);
  }
  {
    SmoothFunction f;
    f.name = "square";  // x^2
    f.d = 1; f.q = 1; f.s = 1.0; f.C = 4.0L; f.a = 1.0L; f.max_order = 12;
    f.derivative = [](const std::vector<int>& k, const std::vector<ld>& x) {
      switch (k[0]) {
        case 0: return x[0] * x[0];
        case 1: return 2 * x[0];
        case 2: return 2.0L;
        default: return 0.0L;
      }
    };
    fs.push_back(f);
  }
  {
    SmoothFunction f;
    f.name = "cubicmx";  // x^3 - x
    f.d = 1; f.q = 1; f.s = 1.0; f.C = 12.0L; f.a = 1.0L; f.max_order = 12;
    f.derivative = [](const std::vector<int>& k, const std::vector<ld>& x) {
      switch (k[0]) {
        case 0: return x[0] * x[0] * x[0] - x[0];
        case 1: return 3 * x[0] * x[0] - 1;
        case 2: return 6 * x[0];
        case 3: return 6.0L;
        default: return 0.0L;
      }
    };
    fs.push_back(f);
  }
  {
    SmoothFunction f;
    f.name = "gauss2d";  // exp(-x^2 - y^2)
    f.d = 2; f.q = 1; f.s = 1.0; f.C = 5.0L; f.a = 1.0L; f.max_order = 12;
    f.derivative = [](const std::vector<int>& k, const std::vector<ld>& x) {
      return detail::gauss_deriv(k[0], x[0]) * detail::gauss_deriv(k[1], x[1]);
    };
    fs.push_back(f);
  }
  {
    SmoothFunction f;
    f.name = "zero";
    f.d = 1; f.q = 1; f.s = 1.0; f.C = 1.0L; f.a = 1.0L; f.max_order = 12;
    f.derivative = [](const std::vector<int>&, const std::vector<ld>&) {
      return 0.0L;
    };
    fs.push_back(f);
  }
  return fs;
}

inline SmoothFunction corpus_function(const std::string& name) {
  for (auto& f : function_corpus())
    if (f.name == name) return f;
  throw std::invalid_argument("unknown corpus function: " + name);
}

namespace detail {
// All mixed-derivative multi-orders with total order <= q (graded order).
inline std::vector<std::vector<int>> derivative_orders(int d, int q) {
  std::vector<std::vector<int>> all;
  std::vector<int> cur(d, 0);
  for (int total = 0; total <= q; ++total) {
    // enumerate compositions of `total` into d parts, lexicographically
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == d - 1) {
        cur[pos] = left;
        all.push_back(cur);
        return;
      }
      for (int v = 0; v <= left; ++v) {
        cur[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    rec(0, total);
  }
  return all;
}
}  // namespace detail

// Scanned sup of all |mixed derivatives| of order <= q over [-2a, 2a]^d
// (the smoothness norm the construction formulas consume, measured on the
// region the derivative oracle certifies).
inline ld scan_cq_norm(const SmoothFunction& f, int points_per_axis = 0) {
  if (points_per_axis == 0) points_per_axis = (f.d == 1) ? 10000 : 512;
  const auto orders = detail::derivative_orders(f.d, f.q);
  ld best = 0;
  std::vector<ld> x(f.d);
  if (f.d == 1) {
    for (int i = 0; i <= points_per_axis; ++i) {
      x[0] = -2 * f.a + 4 * f.a * i / points_per_axis;
      for (const auto& k : orders) best = std::max(best, std::fabs(f.derivative(k, x)));
    }
  } else {
    for (int i = 0; i <= points_per_axis; ++i)
      for (int j = 0; j <= points_per_axis; ++j) {
        x[0] = -2 * f.a + 4 * f.a * i / points_per_axis;
        x[1] = -2 * f.a + 4 * f.a * j / points_per_axis;
        for (const auto& k : orders) best = std::max(best, std::fabs(f.derivative(k, x)));
      }
  }
  return best;
}

// Scanned sup of |f| over [-a, a]^d.
inline ld scan_sup_norm(const SmoothFunction& f, int points_per_axis = 0) {
  if (points_per_axis == 0) points_per_axis = (f.d == 1) ? 10000 : 512;
  ld best = 0;
  std::vector<ld> x(f.d);
  std::vector<int> zero(f.d, 0);
  if (f.d == 1) {
    for (int i = 0; i <= points_per_axis; ++i) {
      x[0] = -f.a + 2 * f.a * i / points_per_axis;
      best = std::max(best, std::fabs(f.derivative(zero, x)));
    }
  } else {
    for (int i = 0; i <= points_per_axis; ++i)
      for (int j = 0; j <= points_per_axis; ++j) {
        x[0] = -f.a + 2 * f.a * i / points_per_axis;
        x[1] = -f.a + 2 * f.a * j / points_per_axis;
        best = std::max(best, std::fabs(f.derivative(zero, x)));
      }
  }
  return best;
}

}  // namespace signet
