#pragma once

// Approximation of the class W^{psi/phi} by the homothet N(b) W^psi through
// the multiplier eta_b(A).

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "opineq/error.hpp"
#include "opineq/hlp.hpp"
#include "opineq/spectral.hpp"
#include "opineq/symbols.hpp"
#include "opineq/truncation.hpp"

namespace opineq {

/// |psi(t)| / |phi(t)|, extended at t = 0 by the pair's declared value.
struct RatioSymbol {
  const SymbolPair& pair;

  double operator()(double t) const {
    const double p = pair.phi.abs_at(t);
    if (p == 0.0) {
      if (!pair.ratio_at_zero) {
        fail(ErrorKind::DomainViolation, "psi/phi has no declared extension at t = 0");
      }
      return *pair.ratio_at_zero;
    }
    return pair.psi.abs_at(t) / p;
  }
};

namespace detail {

inline double eta_with_slope(const SymbolPair& pair, double b, double slope, double t) {
  if (std::abs(t) > b) return 0.0;
  return 1.0 - slope * RatioSymbol{pair}(t);
}

}  // namespace detail

/// eta_b(t) = 1 - (|phi(b)|/|psi(b)|) |psi(t)|/|phi(t)| for |t| <= b, else 0.
inline double eta_eval(const SymbolPair& pair, double b, double t) {
  require_cut(b);
  return detail::eta_with_slope(pair, b, pair.slope(b), t);
}

struct HomothetProjection {
  SpectralElement y;
  double b = 0.0;
  double slope = 0.0;
  double budget = 0.0;
  /// ||psi(A)y||, to be compared with budget.
  double membership_lhs = 0.0;
  /// ||x - y||, to be compared with slope.
  double distance_lhs = 0.0;
  bool pass = false;
};

inline constexpr double kClassTolerance = 1e-10;

/// ||(psi/phi)(A)x||.
inline double ratio_gauge(const SpectralOperator& op, const SymbolPair& pair, const SpectralElement& x) {
  return symbol_norm(op, RatioSymbol{pair}, x);
}

/// y = eta_b(A)x for x in W^{psi/phi}, with both certificates evaluated:
/// ||psi(A)y|| <= N(b) and ||x - y|| <= |phi(b)|/|psi(b)|.
inline HomothetProjection project_to_homothet(const SpectralOperator& op, const SymbolPair& pair, double b,
                                              const SpectralElement& x) {
  require_bound(op, x);
  const double gauge = ratio_gauge(op, pair, x);
  if (gauge > 1.0 + kClassTolerance) {
    fail(ErrorKind::ClassViolation, "||(psi/phi)(A)x|| = " + std::to_string(gauge) + " > 1");
  }
  const auto bundle = operator_budget(pair, b);

  const auto points = op.points();
  const auto coeffs = x.coeffs();
  CoeffVector out(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (coeffs[j] == Complex{}) continue;
    out[j] = detail::eta_with_slope(pair, b, bundle.slope, points[j]) * coeffs[j];
  }
  SpectralElement y(op, std::move(out));

  HomothetProjection result{std::move(y)};
  result.b = b;
  result.slope = bundle.slope;
  result.budget = bundle.budget;
  result.membership_lhs = modulus_norm(op, pair.psi, result.y);
  result.distance_lhs = (x - result.y).norm();
  result.pass = result.membership_lhs <= bundle.budget * (1.0 + kClassTolerance) &&
                result.distance_lhs <= bundle.slope * (1.0 + kClassTolerance);
  return result;
}

/// E(W^{psi/phi}, N(b) W^psi) = |phi(b)| / |psi(b)|.
inline double class_approx_value(const SymbolPair& pair, double b) {
  require_cut(b);
  return pair.slope(b);
}

/// sup of ||phi(A)v|| - N(b)||v|| over single-atom v with ||psi(A)v|| = 1
/// on the band below the maximizer of |phi_b|.
inline ProbeResult class_sharpness_probe(const SpectralOperator& op, const SymbolPair& pair, double b,
                                         double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  const auto bundle = operator_budget(pair, b);
  const auto [s, t] = detail::maximizer_band(bundle, epsilon);
  std::optional<double> best;
  for (double lambda : op.points()) {
    if (!(lambda > s && lambda <= t)) continue;
    const double p = pair.psi.abs_at(lambda);
    if (!(p > 0.0)) continue;
    const double value = (pair.phi.abs_at(lambda) - bundle.budget) / p;
    if (!best || value > *best) best = value;
  }
  if (!best) {
    fail(ErrorKind::EmptyBand, "no spectral point in (" + std::to_string(s) + ", " + std::to_string(t) + "]");
  }
  return detail::finish_probe(*best, bundle.slope, epsilon);
}

}  // namespace opineq
