#pragma once

// The truncated symbol
//   phi_b(t) = |phi(t)| - (|phi(b)| / |psi(b)|) |psi(t)|   for |t| <= b,
//   phi_b(t) = 0                                          for |t| >  b,
// and its sup-norm N(b), the norm of the bounded operator phi_b(A).

#include <cmath>
#include <cstddef>
#include <string>

#include "opineq/error.hpp"
#include "opineq/scalar_search.hpp"
#include "opineq/symbols.hpp"

namespace opineq {

inline constexpr std::size_t kBudgetGridPoints = 4096;

/// Relative resolution at which a maximizer found by golden-section search
/// is located (value comparisons cannot resolve a smooth peak beyond
/// about sqrt(machine epsilon)).
inline constexpr double kMaximizerResolution = 1e-7;

struct TruncationBundle {
  double b = 0.0;
  /// |phi(b)| / |psi(b)|.
  double slope = 0.0;
  /// N(b) = max_t |phi_b(t)|.
  double budget = 0.0;
  /// argmax of |phi_b| in the modulus coordinate u in [0, b].
  double maximizer = 0.0;
  /// True when the pair carries a concave link, i.e. slope is the exact
  /// best-approximation value and not only an upper bound.
  bool sharp = false;
};

inline void require_cut(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) fail(ErrorKind::DegenerateCut, "cut level must be positive and finite");
}

/// phi_b(t) in the moduli convention.
inline double truncated_symbol_eval(const SymbolPair& pair, double b, double t) {
  require_cut(b);
  const double slope = pair.slope(b);
  const double u = std::abs(t);
  // phi_b(b) = 0 exactly; rounding would leave a few ulps.
  if (u >= b) return 0.0;
  return pair.phi.modulus(u) - slope * pair.psi.modulus(u);
}

/// N(b) by a dense scan of |phi_b| over [0, b] plus golden-section
/// refinement; the smallest maximizer wins ties.
inline TruncationBundle operator_budget(const SymbolPair& pair, double b,
                                        std::size_t grid_points = kBudgetGridPoints) {
  require_cut(b);
  if (!pair.ratio_nonincreasing) {
    fail(ErrorKind::InvalidArgument, "operator_budget requires |phi|/|psi| non-increasing");
  }
  const double slope = pair.slope(b);
  auto f = [&](double u) { return std::abs(pair.phi.modulus(u) - slope * pair.psi.modulus(u)); };
  const auto best = search::scan_and_refine(f, 0.0, b, grid_points);

  TruncationBundle bundle;
  bundle.b = b;
  bundle.slope = slope;
  bundle.budget = best.value;
  bundle.maximizer = best.x;
  bundle.sharp = pair.link.has_value();
  return bundle;
}

}  // namespace opineq
