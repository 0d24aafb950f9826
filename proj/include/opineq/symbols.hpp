#pragma once

// Scalar symbols phi, psi, the concave link F with |phi|^2 = F(|psi|^2),
// and numerical validation of the hypotheses every extremal result needs.
//
// All constants are computed from the moduli |phi|, |psi|. The complex
// channel (Symbol::eval) is only used when an operator is applied directly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opineq/error.hpp"
#include "opineq/scalar_search.hpp"

namespace opineq {

struct Symbol {
  std::string name;
  std::function<std::complex<double>(double)> eval;
  /// |eval| on u >= 0; the even extension is implied.
  std::function<double(double)> modulus;
  bool strictly_increasing_modulus = true;
  bool tends_to_infinity = true;
  /// Largest argument at which the modulus is representable; caps the
  /// validation grid.
  double t_max = 1e6;
  /// Set for |t|^k symbols; lets pairs of powers resolve psi/phi at t = 0.
  std::optional<double> power_exponent;

  double abs_at(double t) const { return modulus(std::abs(t)); }
};

namespace symbols {

inline Symbol power(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) fail(ErrorKind::InvalidOrder, "power exponent must be positive");
  Symbol s;
  s.name = "power(" + std::to_string(k) + ")";
  s.eval = [k](double t) { return std::complex<double>(std::pow(std::abs(t), k)); };
  s.modulus = [k](double u) { return std::pow(u, k); };
  s.power_exponent = k;
  return s;
}

/// t^k with its sign (k a positive integer); modulus |t|^k.
inline Symbol signed_power(int k) {
  if (k <= 0) fail(ErrorKind::InvalidOrder, "power exponent must be positive");
  Symbol s;
  s.name = "signed_power(" + std::to_string(k) + ")";
  s.eval = [k](double t) { return std::complex<double>(std::pow(t, k)); };
  s.modulus = [k](double u) { return std::pow(u, k); };
  s.power_exponent = static_cast<double>(k);
  return s;
}

inline Symbol exp_abs() {
  Symbol s;
  s.name = "exp_abs";
  s.eval = [](double t) { return std::complex<double>(std::expm1(std::abs(t))); };
  s.modulus = [](double u) { return std::expm1(u); };
  s.t_max = 700.0;
  return s;
}

inline Symbol log1p_abs() {
  Symbol s;
  s.name = "log1p_abs";
  s.eval = [](double t) { return std::complex<double>(std::log1p(std::abs(t))); };
  s.modulus = [](double u) { return std::log1p(u); };
  return s;
}

/// Registry lookup: "power:<k>", "exp_abs" or "log1p_abs".
inline Symbol by_name(const std::string& name) {
  if (name == "exp_abs") return exp_abs();
  if (name == "log1p_abs") return log1p_abs();
  const std::string prefix = "power:";
  if (name.rfind(prefix, 0) == 0) {
    std::size_t used = 0;
    double k = 0.0;
    try {
      k = std::stod(name.substr(prefix.size()), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != name.size() - prefix.size()) {
      fail(ErrorKind::InvalidArgument, "bad power exponent in '" + name + "'");
    }
    return power(k);
  }
  fail(ErrorKind::InvalidArgument, "unknown symbol '" + name + "'");
}

}  // namespace symbols

enum class LinkProvenance { closed_form, derived_from_pair };

struct ConcaveLink {
  std::function<double(double)> F;
  LinkProvenance provenance = LinkProvenance::closed_form;
  std::string description;

  double operator()(double v) const { return F(v); }

  static ConcaveLink power(double exponent) {
    return {[exponent](double v) { return std::pow(v, exponent); }, LinkProvenance::closed_form,
            "v^" + std::to_string(exponent)};
  }
  static ConcaveLink identity() { return {[](double v) { return v; }, LinkProvenance::closed_form, "v"}; }
};

/// Log-spaced sample points on [lo, hi].
struct ValidationGrid {
  double lo = 1e-6;
  double hi = 1e6;
  std::size_t n = 512;

  std::vector<double> points(double cap = std::numeric_limits<double>::infinity()) const {
    const double top = std::min(hi, cap);
    std::vector<double> out;
    if (n == 0 || !(top > lo)) return out;
    out.reserve(n);
    const double a = std::log(lo);
    const double b = std::log(top);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(i + 1 == n ? top : std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    return out;
  }
};

struct SymbolPair {
  Symbol phi;
  Symbol psi;
  /// Present when |phi|^2 = F(|psi|^2) with F concave was established.
  std::optional<ConcaveLink> link;
  bool ratio_nonincreasing = false;
  /// Continuous extension of |psi|/|phi| at t = 0, when one exists.
  std::optional<double> ratio_at_zero;

  /// |phi(b)| / |psi(b)|.
  double slope(double b) const {
    const double p = psi.abs_at(b);
    if (!(p > 0.0) || !std::isfinite(p)) fail(ErrorKind::DegenerateCut, "psi(b) is zero or not finite");
    return phi.abs_at(b) / p;
  }

  const ConcaveLink& require_link() const {
    if (!link) fail(ErrorKind::NotConcaveLink, "pair has no concave link");
    return *link;
  }
};

/// Smallest t >= 0 with |s(t)| >= y, located by bisection after geometric
/// bracketing (factor 4, cap 1e12).
inline double inverse_modulus(const Symbol& s, double y) {
  if (!(y >= 0.0) || !std::isfinite(y)) fail(ErrorKind::InvalidArgument, "inverse_modulus needs finite y >= 0");
  if (!s.strictly_increasing_modulus) fail(ErrorKind::InvalidArgument, s.name + " is not strictly increasing");
  const double at_zero = s.modulus(0.0);
  if (y <= at_zero) {
    if (y == at_zero) return 0.0;
    fail(ErrorKind::OutOfRange, "value below |" + s.name + "(0)|");
  }
  constexpr double kCap = 1e12;
  double lo = 0.0;
  double hi = 1.0;
  while (!(s.modulus(hi) >= y)) {
    lo = hi;
    hi *= 4.0;
    if (hi > kCap || (!s.tends_to_infinity && hi > s.t_max)) {
      fail(ErrorKind::OutOfRange, "value " + std::to_string(y) + " not reached by " + s.name);
    }
  }
  return search::bisect_threshold([&](double t) { return s.modulus(t) >= y; }, lo, hi);
}

namespace detail {

struct LinkCheck {
  double zero_violation = 0.0;
  double monotone_violation = 0.0;
  double concavity_violation = 0.0;
};

// Violations are relative to max(1, |F|) so that links spanning many
// decades are judged at double-precision headroom.
inline LinkCheck check_link_shape(const std::function<double(double)>& F, const std::vector<double>& vs) {
  LinkCheck out;
  out.zero_violation = std::abs(F(0.0));
  for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
    const double fa = F(vs[i]);
    const double fb = F(vs[i + 1]);
    const double scale = std::max(1.0, std::max(std::abs(fa), std::abs(fb)));
    out.monotone_violation = std::max(out.monotone_violation, (fa - fb) / scale);
    const double fm = F(0.5 * (vs[i] + vs[i + 1]));
    out.concavity_violation = std::max(out.concavity_violation, (0.5 * (fa + fb) - fm) / scale);
  }
  return out;
}

inline std::vector<double> link_grid(const Symbol& psi, const ValidationGrid& grid, double t_cap) {
  constexpr double kMaxV = 1e300;
  const double vlo = std::pow(psi.modulus(grid.lo), 2);
  double vhi = std::pow(psi.modulus(std::min(grid.hi, t_cap)), 2);
  if (!std::isfinite(vhi) || vhi > kMaxV) vhi = kMaxV;
  ValidationGrid vg{std::max(vlo, std::numeric_limits<double>::min()), vhi, grid.n};
  return vg.points();
}

}  // namespace detail

inline constexpr double kLinkTolerance = 1e-10;

/// Builds F(v) = |phi(|psi|^{-1}(sqrt v))|^2 and checks it is a concave,
/// increasing link with F(0) = 0 on the validation grid.
inline ConcaveLink derive_link(const Symbol& phi, const Symbol& psi, const ValidationGrid& grid = {}) {
  ConcaveLink link;
  link.provenance = LinkProvenance::derived_from_pair;
  link.description = "|" + phi.name + "(" + psi.name + "^-1(sqrt v))|^2";
  link.F = [phi, psi](double v) {
    if (v <= 0.0) return std::pow(phi.modulus(0.0), 2);
    return std::pow(phi.modulus(inverse_modulus(psi, std::sqrt(v))), 2);
  };
  const auto check = detail::check_link_shape(link.F, detail::link_grid(psi, grid, std::min(phi.t_max, psi.t_max)));
  if (check.zero_violation > 1e-12) fail(ErrorKind::NotConcaveLink, "F(0) != 0");
  if (check.monotone_violation > kLinkTolerance) fail(ErrorKind::NotConcaveLink, "F is not increasing");
  if (check.concavity_violation > kLinkTolerance) {
    fail(ErrorKind::NotConcaveLink, "midpoint concavity violated by " + std::to_string(check.concavity_violation));
  }
  return link;
}

namespace detail {

inline bool ratio_nonincreasing_on(const Symbol& phi, const Symbol& psi, const std::vector<double>& ts,
                                   double* worst = nullptr) {
  double w = 0.0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (double t : ts) {
    const double p = psi.modulus(t);
    if (!(p > 0.0)) continue;
    const double r = phi.modulus(t) / p;
    if (std::isfinite(prev) && prev > 0.0) w = std::max(w, r / prev - 1.0);
    prev = r;
  }
  if (worst) *worst = w;
  return w <= 1e-12;
}

}  // namespace detail

struct PairOptions {
  ValidationGrid grid{};
  /// Overrides the inferred extension of |psi|/|phi| at 0.
  std::optional<double> ratio_at_zero;
};

/// Pair with a numerically derived link. A pair whose link is not concave
/// is still returned (link empty); it remains usable where only ratio
/// monotonicity is needed.
inline SymbolPair make_pair(Symbol phi, Symbol psi, const PairOptions& options = {}) {
  SymbolPair pair;
  const auto ts = options.grid.points(std::min(phi.t_max, psi.t_max));
  pair.ratio_nonincreasing = detail::ratio_nonincreasing_on(phi, psi, ts);
  try {
    pair.link = derive_link(phi, psi, options.grid);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotConcaveLink) throw;
  }
  if (options.ratio_at_zero) {
    pair.ratio_at_zero = options.ratio_at_zero;
  } else if (phi.power_exponent && psi.power_exponent) {
    if (*psi.power_exponent > *phi.power_exponent) pair.ratio_at_zero = 0.0;
    if (*psi.power_exponent == *phi.power_exponent) pair.ratio_at_zero = 1.0;
  }
  pair.phi = std::move(phi);
  pair.psi = std::move(psi);
  return pair;
}

/// phi = |t|^k, psi = |t|^r with the closed-form link F(v) = v^{k/r}.
inline SymbolPair power_pair(double k, double r) {
  if (!(k > 0.0) || !(r > k) || !std::isfinite(r)) {
    fail(ErrorKind::InvalidOrder, "power pair needs 0 < k < r (k=" + std::to_string(k) + ", r=" + std::to_string(r) + ")");
  }
  SymbolPair pair;
  pair.phi = symbols::power(k);
  pair.psi = symbols::power(r);
  pair.link = ConcaveLink::power(k / r);
  pair.ratio_nonincreasing = true;
  pair.ratio_at_zero = 0.0;
  return pair;
}

struct HypothesisCheck {
  std::string name;
  bool passed;
  double worst_violation;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  std::vector<std::string> warnings;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const HypothesisCheck& c) { return c.passed; });
  }
  const HypothesisCheck* find(const std::string& name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

namespace detail {

inline HypothesisCheck check_even(const Symbol& s, const std::vector<double>& ts) {
  double worst = 0.0;
  for (double t : ts) {
    const double a = std::abs(s.eval(t));
    const double b = std::abs(s.eval(-t));
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::max(a, b)));
  }
  return {s.name + "_even", worst <= 1e-10, worst};
}

inline HypothesisCheck check_increasing(const Symbol& s, const std::vector<double>& ts) {
  double worst = 0.0;
  bool strict = true;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double a = s.modulus(ts[i]);
    const double b = s.modulus(ts[i + 1]);
    if (!(b > a)) {
      strict = false;
      worst = std::max(worst, a - b);
    }
  }
  return {s.name + "_increasing", strict, worst};
}

}  // namespace detail

/// Checks every hypothesis on the validation grid. Never throws on a
/// failing hypothesis; failures are carried by the report.
inline ValidationReport validate_pair(const SymbolPair& pair, const ValidationGrid& grid = {}) {
  ValidationReport report;
  const auto ts = grid.points(std::min(pair.phi.t_max, pair.psi.t_max));

  auto phi_even = detail::check_even(pair.phi, ts);
  phi_even.name = "phi_even";
  auto psi_even = detail::check_even(pair.psi, ts);
  psi_even.name = "psi_even";
  auto phi_inc = detail::check_increasing(pair.phi, ts);
  phi_inc.name = "phi_increasing";
  auto psi_inc = detail::check_increasing(pair.psi, ts);
  psi_inc.name = "psi_increasing";
  report.checks = {phi_even, psi_even, phi_inc, psi_inc};

  double ratio_worst = 0.0;
  const bool ratio_ok = detail::ratio_nonincreasing_on(pair.phi, pair.psi, ts, &ratio_worst);
  report.checks.push_back({"ratio_nonincreasing", ratio_ok, ratio_worst});

  if (pair.link) {
    const auto vs = detail::link_grid(pair.psi, grid, std::min(pair.phi.t_max, pair.psi.t_max));
    const auto shape = detail::check_link_shape(pair.link->F, vs);
    report.checks.push_back({"link_zero", shape.zero_violation <= 1e-12, shape.zero_violation});
    report.checks.push_back({"link_increasing", shape.monotone_violation <= kLinkTolerance, shape.monotone_violation});
    report.checks.push_back({"link_concave", shape.concavity_violation <= kLinkTolerance, shape.concavity_violation});
    double worst = 0.0;
    for (double t : ts) {
      const double lhs = std::pow(pair.phi.modulus(t), 2);
      const double v = std::pow(pair.psi.modulus(t), 2);
      if (!std::isfinite(lhs) || !std::isfinite(v)) continue;
      const double rhs = (*pair.link)(v);
      if (!std::isfinite(rhs)) continue;
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::numeric_limits<double>::min()));
    }
    report.checks.push_back({"link_consistent", worst <= 1e-8, worst});
  } else {
    report.checks.push_back({"link_concave", false, std::numeric_limits<double>::infinity()});
  }

  // Phase coherence of phi/psi across +-t. The extremal constants rely on
  // it implicitly; moduli are used regardless, so this is only a warning.
  double phase_spread = 0.0;
  std::optional<double> ref;
  for (double t : ts) {
    for (double u : {t, -t}) {
      const auto p = pair.phi.eval(u);
      const auto q = pair.psi.eval(u);
      if (std::abs(q) == 0.0 || std::abs(p) == 0.0) continue;
      const double arg = std::arg(p / q);
      if (!ref) ref = arg;
      phase_spread = std::max(phase_spread, std::abs(std::remainder(arg - *ref, 2.0 * std::numbers::pi)));
    }
  }
  if (phase_spread > 1e-8) {
    report.warnings.push_back("phi/psi phase is not coherent (spread " + std::to_string(phase_spread) +
                              " rad); constants are computed from moduli");
  }
  return report;
}

}  // namespace opineq
