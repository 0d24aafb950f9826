#pragma once

// Best approximation of phi(A) on W^psi by bounded operators of norm at
// most N: the extremal operator phi_b(A), the value |phi(b)|/|psi(b)|, the
// inversion N(b) = N, and the dual lower bound sup_delta {omega - N delta}.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "opineq/error.hpp"
#include "opineq/hlp.hpp"
#include "opineq/scalar_search.hpp"
#include "opineq/spectral.hpp"
#include "opineq/symbols.hpp"
#include "opineq/truncation.hpp"

namespace opineq {

/// E(N(b)) = |phi(b)| / |psi(b)|. When the pair has a concave link the
/// value is cross-checked against sqrt(F(|psi(b)|^2)) / |psi(b)|.
inline double best_approx_value(const SymbolPair& pair, double b) {
  require_cut(b);
  const double slope = pair.slope(b);
  if (pair.link) {
    const double p = pair.psi.abs_at(b);
    const double via_link = std::sqrt((*pair.link)(p * p)) / p;
    if (std::abs(via_link - slope) > 1e-10 * std::max(1.0, slope)) {
      fail(ErrorKind::LinkInconsistency,
           "slope " + std::to_string(slope) + " vs link value " + std::to_string(via_link));
    }
  }
  return slope;
}

/// The cut level b with N(b) = budget. N(b) is continuous and strictly
/// increasing, so geometric bracketing (factor 4, cap 1e12) and bisection
/// suffice.
inline TruncationBundle solve_budget(const SymbolPair& pair, double budget) {
  if (!(budget > 0.0) || !std::isfinite(budget)) fail(ErrorKind::InvalidArgument, "budget must be positive");
  constexpr double kCap = 1e12;
  double lo = 0.0;
  double hi = 1.0;
  while (operator_budget(pair, hi).budget < budget) {
    lo = hi;
    hi *= 4.0;
    if (hi > kCap) fail(ErrorKind::BudgetUnreachable, "N(b) stays below " + std::to_string(budget) + " for b <= 1e12");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double n = operator_budget(pair, mid).budget;
    if (std::abs(n - budget) <= 1e-13 * budget) {
      lo = hi = mid;
      break;
    }
    if (n < budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return operator_budget(pair, 0.5 * (lo + hi));
}

/// phi_b(A)x.
inline SpectralElement apply_truncated(const SpectralOperator& op, const SymbolPair& pair, double b,
                                       const SpectralElement& x) {
  require_cut(b);
  const double slope = pair.slope(b);
  return apply_symbol(
      op,
      [&](double t) {
        const double u = std::abs(t);
        return u >= b ? 0.0 : pair.phi.modulus(u) - slope * pair.psi.modulus(u);
      },
      x);
}

/// phi(A)x through the modulus channel.
inline SpectralElement apply_phi(const SpectralOperator& op, const SymbolPair& pair, const SpectralElement& x) {
  return apply_symbol(op, [&](double t) { return pair.phi.abs_at(t); }, x);
}

/// Delta(N) = sup_{delta > 0} {omega(delta) - N delta}, maximized over a
/// log grid on [1e-30, 1e30] and refined by golden section. A supremum at
/// the small-delta end returns the boundary value (0 for links with
/// omega(0+) = 0); one at the large-delta end is reported as UnboundedSup.
inline double stechkin_lower_bound(const ConcaveLink& link, double budget) {
  if (!(budget >= 0.0) || !std::isfinite(budget)) fail(ErrorKind::InvalidArgument, "N must be >= 0");
  auto f = [&](double log_delta) {
    const double delta = std::pow(10.0, log_delta);
    try {
      const double v = modulus_of_continuity(link, delta) - budget * delta;
      return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
    } catch (const Error&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  constexpr double kLo = -30.0;
  constexpr double kHi = 30.0;
  constexpr std::size_t kPoints = 1201;
  const double h = (kHi - kLo) / static_cast<double>(kPoints - 1);

  std::vector<double> values(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i) values[i] = f(kLo + h * static_cast<double>(i));
  std::size_t best = 0;
  for (std::size_t i = 1; i < kPoints; ++i) {
    if (values[i] > values[best]) best = i;
  }
  if (!std::isfinite(values[best])) fail(ErrorKind::UnboundedSup, "omega could not be evaluated on the delta grid");
  const bool top = best + 1 == kPoints || !std::isfinite(values[best + 1]);
  const bool bottom = best == 0 || !std::isfinite(values[best - 1]);
  if (top) fail(ErrorKind::UnboundedSup, "omega(delta) - N delta still increasing at the largest delta");
  if (bottom) return std::max(0.0, values[best]);

  const double x = kLo + h * static_cast<double>(best);
  const auto refined = search::golden_maximize(f, x - h, x + h);
  return std::max(values[best], refined.value);
}

}  // namespace opineq
