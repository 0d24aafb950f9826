#pragma once

// Multiplicative and additive inequalities for functions of a self-adjoint
// operator, the modulus of continuity of phi(A) on W^psi, and the band
// elements that show each bound cannot be improved.

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "opineq/error.hpp"
#include "opineq/spectral.hpp"
#include "opineq/symbols.hpp"
#include "opineq/truncation.hpp"

namespace opineq {

inline constexpr double kVerdictTolerance = 1e-10;

/// ||s(A)x|| through the modulus channel.
inline double modulus_norm(const SpectralOperator& op, const Symbol& s, const SpectralElement& x) {
  return symbol_norm(op, [&s](double t) { return s.abs_at(t); }, x);
}

/// The set {x : ||sigma(A)x|| <= radius}. With sigma = psi this is W^psi.
struct OperatorClass {
  Symbol sigma;
  double radius = 1.0;

  OperatorClass(Symbol s, double r = 1.0) : sigma(std::move(s)), radius(r) {
    if (!(radius > 0.0)) fail(ErrorKind::InvalidArgument, "class radius must be positive");
  }

  double gauge(const SpectralOperator& op, const SpectralElement& x) const { return modulus_norm(op, sigma, x); }
  bool contains(const SpectralOperator& op, const SpectralElement& x, double rel_tol = kVerdictTolerance) const {
    return gauge(op, x) <= radius * (1.0 + rel_tol);
  }
};

struct InequalityVerdict {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
  std::optional<SpectralElement> witness;
};

inline InequalityVerdict make_verdict(double lhs, double rhs, std::optional<SpectralElement> witness = std::nullopt) {
  InequalityVerdict v;
  v.lhs = lhs;
  v.rhs = rhs;
  v.slack = rhs - lhs;
  v.holds = v.slack >= -kVerdictTolerance * std::max(1.0, rhs);
  v.witness = std::move(witness);
  return v;
}

/// ||x|| sqrt(F(||psi(A)x||^2 / ||x||^2)).
inline double multiplicative_bound(const ConcaveLink& link, double norm_x, double norm_psi_x) {
  if (!(norm_x > 0.0)) fail(ErrorKind::ZeroElement, "multiplicative bound needs x != 0");
  if (!(norm_psi_x >= 0.0)) fail(ErrorKind::InvalidArgument, "||psi(A)x|| must be non-negative");
  const double ratio = norm_psi_x / norm_x;
  return norm_x * std::sqrt(link(ratio * ratio));
}

inline InequalityVerdict check_multiplicative(const SpectralOperator& op, const SymbolPair& pair,
                                              const SpectralElement& x) {
  require_bound(op, x);
  const ConcaveLink& link = pair.require_link();
  const double nx = x.norm();
  if (!(nx > 0.0)) fail(ErrorKind::ZeroElement, "x must be non-zero");
  const double lhs = modulus_norm(op, pair.phi, x);
  const double rhs = multiplicative_bound(link, nx, modulus_norm(op, pair.psi, x));
  return make_verdict(lhs, rhs, x);
}

/// omega(delta) = delta sqrt(F(1 / delta^2)).
inline double modulus_of_continuity(const ConcaveLink& link, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) fail(ErrorKind::InvalidDelta, "delta must be positive");
  return delta * std::sqrt(link(1.0 / (delta * delta)));
}

/// Element of norm delta on the band ((1 - eps) t, t], t = |psi|^{-1}(1/delta).
/// It lies in W^psi and ||phi(A)x|| >= |phi((1 - eps) t)| delta.
inline SpectralElement extremal_element(const SpectralOperator& op, const SymbolPair& pair, double delta,
                                        double epsilon) {
  if (!(delta > 0.0) || !std::isfinite(delta)) fail(ErrorKind::InvalidDelta, "delta must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  const double t = inverse_modulus(pair.psi, 1.0 / delta);
  return band_element(op, (1.0 - epsilon) * t, t, delta);
}

struct AdditiveCoefficients {
  double slope;
  double intercept;
};

/// Coefficients of ||phi(A)x|| <= slope ||psi(A)x|| + intercept ||x||.
inline AdditiveCoefficients additive_coefficients(const SymbolPair& pair, double b) {
  const auto bundle = operator_budget(pair, b);
  return {bundle.slope, bundle.budget};
}

inline InequalityVerdict check_additive(const SpectralOperator& op, const SymbolPair& pair, const SpectralElement& x,
                                        const AdditiveCoefficients& coeffs) {
  require_bound(op, x);
  const double nx = x.norm();
  if (!(nx > 0.0)) fail(ErrorKind::ZeroElement, "x must be non-zero");
  const double lhs = modulus_norm(op, pair.phi, x);
  const double rhs = coeffs.slope * modulus_norm(op, pair.psi, x) + coeffs.intercept * nx;
  return make_verdict(lhs, rhs, x);
}

inline InequalityVerdict check_additive(const SpectralOperator& op, const SymbolPair& pair, const SpectralElement& x,
                                        double b) {
  return check_additive(op, pair, x, additive_coefficients(pair, b));
}

/// Outcome of a sharpness probe: `achieved` approaches `slope` as the band
/// shrinks, and constant = (slope - achieved) / (slope * epsilon).
struct ProbeResult {
  double achieved = 0.0;
  double slope = 0.0;
  double epsilon = 0.0;
  double constant = 0.0;
};

namespace detail {

inline ProbeResult finish_probe(double achieved, double slope, double epsilon) {
  if (achieved > slope + 1e-10 * std::max(1.0, slope)) {
    fail(ErrorKind::TheoremViolation, "probe exceeded the sharp constant");
  }
  ProbeResult r;
  r.achieved = achieved;
  r.slope = slope;
  r.epsilon = epsilon;
  r.constant = std::max(0.0, (slope - achieved) / (slope * epsilon));
  return r;
}

// Band ((1 - eps) xi, xi] around the maximizer of |phi_b|, widened on the
// right by the maximizer resolution. When phi_b vanishes identically every
// atom in (0, b] is extremal.
inline std::pair<double, double> maximizer_band(const TruncationBundle& bundle, double epsilon) {
  if (bundle.budget == 0.0 || bundle.maximizer == 0.0) return {0.0, bundle.b};
  const double xi = bundle.maximizer;
  return {(1.0 - epsilon) * xi, xi * (1.0 + kMaximizerResolution)};
}

}  // namespace detail

/// Builds x on the band below the maximizer xi of |phi_b| and returns
/// (||phi(A)x|| - N(b)||x||) / ||psi(A)x||, which tends to the slope.
inline ProbeResult additive_sharpness_probe(const SpectralOperator& op, const SymbolPair& pair, double b,
                                            double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  const auto bundle = operator_budget(pair, b);
  const auto [s, t] = detail::maximizer_band(bundle, epsilon);
  const auto x = band_element(op, s, t, 1.0);
  const double npsi = modulus_norm(op, pair.psi, x);
  if (!(npsi > 0.0)) fail(ErrorKind::EmptyBand, "band element has psi(A)x = 0");
  const double ratio = (modulus_norm(op, pair.phi, x) - bundle.budget * x.norm()) / npsi;
  return detail::finish_probe(ratio, bundle.slope, epsilon);
}

}  // namespace opineq
