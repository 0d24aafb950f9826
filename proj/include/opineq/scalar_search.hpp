#pragma once

// One-dimensional search primitives shared by the extremal computations:
// grid scan with deterministic tie-breaking, golden-section refinement,
// and monotone bisection.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include "opineq/error.hpp"

namespace opineq::search {

struct Extremum {
  double x;
  double value;
};

/// Golden-section search for a maximum of f on [a, b]. The result never
/// reports a value below the best of the probed points.
template <class F>
Extremum golden_maximize(F&& f, double a, double b, double tol = 1e-14, int max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && std::abs(b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
}

/// Maximum of f over the uniform grid lo + i (hi - lo) / (n - 1); the
/// smallest abscissa wins ties. Returns the grid index through `index`.
template <class F>
Extremum grid_maximize(F&& f, double lo, double hi, std::size_t n, std::size_t* index = nullptr) {
  Extremum best{lo, -std::numeric_limits<double>::infinity()};
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (i + 1 == n) ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double v = f(x);
    if (v > best.value) {
      best = {x, v};
      best_i = i;
    }
  }
  if (index) *index = best_i;
  return best;
}

/// Global maximum of f on [lo, hi]: grid scan, then golden-section
/// refinement inside the cells adjacent to the best grid point. The
/// refinement is kept only when it strictly improves on the grid value.
template <class F>
Extremum scan_and_refine(F&& f, double lo, double hi, std::size_t n) {
  std::size_t i = 0;
  Extremum best = grid_maximize(f, lo, hi, n, &i);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  const double a = i == 0 ? lo : best.x - h;
  const double b = i + 1 == n ? hi : best.x + h;
  const Extremum refined = golden_maximize(f, a, b);
  if (refined.value > best.value) best = refined;
  return best;
}

/// Same as scan_and_refine but in log10 coordinates on [lo, hi], lo > 0.
/// `at_boundary` is set when the grid maximum sits on the first or last node.
template <class F>
Extremum log_scan_and_refine(F&& f, double lo, double hi, std::size_t n, int* at_boundary = nullptr) {
  auto g = [&](double e) { return f(std::pow(10.0, e)); };
  const double elo = std::log10(lo);
  const double ehi = std::log10(hi);
  std::size_t i = 0;
  Extremum best = grid_maximize(g, elo, ehi, n, &i);
  if (at_boundary) *at_boundary = i == 0 ? -1 : (i + 1 == n ? 1 : 0);
  const double h = (ehi - elo) / static_cast<double>(n - 1);
  const double a = i == 0 ? elo : best.x - h;
  const double b = i + 1 == n ? ehi : best.x + h;
  const Extremum refined = golden_maximize(g, a, b);
  if (refined.value > best.value) best = refined;
  return {std::pow(10.0, best.x), best.value};
}

/// Smallest x in [lo, hi] (to floating resolution) with pred(x) true,
/// assuming pred(lo) is false, pred(hi) is true and pred is monotone.
template <class P>
double bisect_threshold(P&& pred, double lo, double hi, int max_iter = 2000) {
  for (int i = 0; i < max_iter; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace opineq::search
