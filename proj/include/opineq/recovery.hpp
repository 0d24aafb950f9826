#pragma once

// Optimal recovery of phi(A) on W^psi from data known up to an error delta.
// The optimal error is omega(delta) = l(delta), realized by phi_{b*}(A)
// where b* minimizes |phi(b)|/|psi(b)| + N(b) delta.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "opineq/error.hpp"
#include "opineq/hlp.hpp"
#include "opineq/scalar_search.hpp"
#include "opineq/spectral.hpp"
#include "opineq/stechkin.hpp"
#include "opineq/symbols.hpp"
#include "opineq/truncation.hpp"

namespace opineq {

struct RecoveryPlan {
  double delta = 0.0;
  double b_star = 0.0;
  /// l(delta) = slope(b*) + N(b*) delta.
  double value = 0.0;
  TruncationBundle bundle;
};

inline constexpr double kIdentityTolerance = 1e-6;

/// l(delta) = inf_{b > 0} {|phi(b)|/|psi(b)| + N(b) delta}, via a log grid
/// over b in [1e-6, 1e6] and golden-section refinement.
inline RecoveryPlan l_delta(const SymbolPair& pair, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) fail(ErrorKind::InvalidDelta, "delta must be positive");
  auto objective = [&](double b) {
    const auto bundle = operator_budget(pair, b);
    return -(bundle.slope + bundle.budget * delta);
  };
  int boundary = 0;
  const auto best = search::log_scan_and_refine(objective, 1e-6, 1e6, 145, &boundary);
  if (boundary != 0) {
    fail(ErrorKind::BracketExhausted, "no interior minimizer of slope + N delta for b in [1e-6, 1e6]");
  }
  RecoveryPlan plan;
  plan.delta = delta;
  plan.b_star = best.x;
  plan.bundle = operator_budget(pair, best.x);
  plan.value = plan.bundle.slope + plan.bundle.budget * delta;
  return plan;
}

/// The optimal recovery error omega(delta), verified against l(delta).
inline double recovery_value(const SymbolPair& pair, double delta) {
  const double omega = modulus_of_continuity(pair.require_link(), delta);
  const double l = l_delta(pair, delta).value;
  if (std::abs(omega - l) > kIdentityTolerance * omega) {
    fail(ErrorKind::TheoremViolation,
         "omega(" + std::to_string(delta) + ") = " + std::to_string(omega) + " but l = " + std::to_string(l));
  }
  return omega;
}

/// The method phi_{b*}(A) applied to the data. At delta = 0 the finite
/// model makes phi(A) bounded, so it is applied directly.
inline SpectralElement recover(const SpectralOperator& op, const SymbolPair& pair, double delta,
                               const SpectralElement& data) {
  require_bound(op, data);
  if (!(delta >= 0.0) || !std::isfinite(delta)) fail(ErrorKind::InvalidDelta, "delta must be >= 0");
  if (delta == 0.0) return apply_phi(op, pair, data);
  return apply_truncated(op, pair, l_delta(pair, delta).b_star, data);
}

struct NoiseReport {
  double b = 0.0;
  double delta = 0.0;
  /// max over samples of ||phi(A)x - phi_b(A)eta||.
  double empirical_sup = 0.0;
  /// slope(b) + N(b) delta.
  double analytic_cap = 0.0;
  /// Error of the constructed band witness, when its band is non-empty.
  std::optional<double> witness;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline double error_norm(const SpectralOperator& op, const SymbolPair& pair, double b, const SpectralElement& x,
                         const SpectralElement& data) {
  return (apply_phi(op, pair, x) - apply_truncated(op, pair, b, data)).norm();
}

// Noise of norm delta along -phi_b(A) r, r = (phi - phi_b)(A)x: the
// direction that increases the error fastest from eta = x.
inline SpectralElement aligned_noise(const SpectralOperator& op, const SymbolPair& pair, double b, double delta,
                                     const SpectralElement& x) {
  const auto r = apply_phi(op, pair, x) - apply_truncated(op, pair, b, x);
  auto w = apply_truncated(op, pair, b, r);
  double nw = w.norm();
  if (!(nw > 0.0)) {
    w = x;
    nw = x.norm();
  }
  if (!(nw > 0.0)) return SpectralElement::zero(op);
  return Complex(-delta / nw) * w;
}

}  // namespace detail

/// Empirical U_delta(phi_b(A)) over seeded random x in W^psi with random
/// and worst-case aligned noise, plus one band witness near
/// t = |psi|^{-1}(1/delta) (near b when delta = 0).
inline NoiseReport deviation_with_noise(const SpectralOperator& op, const SymbolPair& pair, double b, double delta,
                                        std::size_t samples, std::uint64_t seed) {
  require_cut(b);
  if (!(delta >= 0.0) || !std::isfinite(delta)) fail(ErrorKind::InvalidDelta, "delta must be >= 0");
  if (samples == 0) fail(ErrorKind::InvalidArgument, "samples must be >= 1");
  const auto bundle = operator_budget(pair, b);

  NoiseReport report;
  report.b = b;
  report.delta = delta;
  report.analytic_cap = bundle.slope + bundle.budget * delta;
  report.samples = samples;
  report.seed = seed;

  const std::size_t n = op.size();
  for (std::size_t i = 0; i < samples; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss;

    CoeffVector c(n);
    for (auto& v : c) v = {gauss(rng), gauss(rng)};
    SpectralElement x(op, std::move(c));
    const double g = modulus_norm(op, pair.psi, x);
    x = Complex(1.0 / (g > 0.0 ? g : x.norm())) * x;

    double worst = detail::error_norm(op, pair, b, x, x);
    if (delta > 0.0) {
      CoeffVector e(n);
      for (auto& v : e) v = {gauss(rng), gauss(rng)};
      SpectralElement noise(op, std::move(e));
      noise = Complex(delta / noise.norm()) * noise;
      worst = std::max(worst, detail::error_norm(op, pair, b, x, x + noise));
      worst = std::max(worst, detail::error_norm(op, pair, b, x, x + detail::aligned_noise(op, pair, b, delta, x)));
    }
    report.empirical_sup = std::max(report.empirical_sup, worst);
  }

  try {
    double w = 0.0;
    if (delta > 0.0) {
      const double t = inverse_modulus(pair.psi, 1.0 / delta);
      const auto x = band_element(op, 0.99 * t, t, delta);
      // eta = 0, i.e. the noise cancels the signal.
      w = detail::error_norm(op, pair, b, x, SpectralElement::zero(op));
      w = std::max(w, detail::error_norm(op, pair, b, x, x + detail::aligned_noise(op, pair, b, delta, x)));
    } else {
      auto x = band_element(op, 0.99 * b, b, 1.0);
      x = Complex(1.0 / modulus_norm(op, pair.psi, x)) * x;
      w = detail::error_norm(op, pair, b, x, x);
    }
    report.witness = w;
    report.empirical_sup = std::max(report.empirical_sup, w);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EmptyBand && e.kind() != ErrorKind::OutOfRange) throw;
  }
  return report;
}

}  // namespace opineq
