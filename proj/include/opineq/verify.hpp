#pragma once

// Invariant suites behind `opineq verify`. Each suite returns one row per
// check; a run passes iff every row passes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opineq/classes.hpp"
#include "opineq/hlp.hpp"
#include "opineq/recovery.hpp"
#include "opineq/sampling.hpp"
#include "opineq/spectral.hpp"
#include "opineq/stechkin.hpp"
#include "opineq/symbols.hpp"

namespace opineq::verify {

struct CheckRow {
  std::string suite;
  std::string check;
  double value;
  double threshold;
  bool pass;
};

struct PowerOrder {
  double k;
  double r;
};

struct Config {
  std::uint64_t seed = 42;
  std::size_t trials = 1000;
  /// Restricts pair-parametrized suites to one power pair.
  std::optional<PowerOrder> power;
  std::vector<double> b_grid = {0.5, 1.0, 2.0, 4.0};
};

inline std::vector<PowerOrder> pairs_for(const Config& config) {
  if (config.power) return {*config.power};
  return {{1, 2}, {1, 3}, {2, 3}};
}

inline std::string io_number(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

inline std::string pair_label(const PowerOrder& p) { return "(" + io_number(p.k) + "," + io_number(p.r) + ")"; }

// Closed forms for power pairs, used as independent oracles.
inline double power_budget(const PowerOrder& p, double b) {
  return std::pow(b, p.k) * std::pow(p.k / p.r, p.k / (p.r - p.k)) * (1.0 - p.k / p.r);
}
inline double power_maximizer(const PowerOrder& p, double b) { return b * std::pow(p.k / p.r, 1.0 / (p.r - p.k)); }

struct NamedOperator {
  std::string name;
  SpectralOperator op;
};

/// Diagonal (101 points on [-5, 5]), Hermitian 16x16 and fourier_grid(256, 2 pi).
inline std::vector<NamedOperator> sweep_operators(std::uint64_t seed) {
  std::vector<double> pts(101);
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = -5.0 + 0.1 * static_cast<double>(i);
  return {{"diagonal", from_eigenvalues(pts)},
          {"hermitian16", from_hermitian(sampling::random_hermitian(16, seed, 3.0))},
          {"fourier256", from_fourier_grid(256, 2.0 * std::numbers::pi)}};
}

/// Uniform grid on [0, 2b] with the point `xi` added.
inline SpectralOperator spectrum_containing(double xi, double b, std::size_t n = 400) {
  std::vector<double> pts;
  for (std::size_t i = 0; i <= n; ++i) pts.push_back(2.0 * b * static_cast<double>(i) / static_cast<double>(n));
  pts.push_back(xi);
  return from_eigenvalues(pts);
}

inline CheckRow at_most(std::string suite, std::string check, double value, double threshold) {
  return {std::move(suite), std::move(check), value, threshold, value <= threshold};
}
inline CheckRow at_least(std::string suite, std::string check, double value, double threshold) {
  return {std::move(suite), std::move(check), value, threshold, value >= threshold};
}

inline std::vector<CheckRow> multiplicative(const Config& config) {
  std::vector<CheckRow> rows;
  const auto ops = sweep_operators(config.seed);
  for (const auto& [name, op] : ops) {
    for (const auto& order : pairs_for(config)) {
      const auto pair = power_pair(order.k, order.r);
      double worst = 0.0;
      for (std::size_t i = 0; i < config.trials; ++i) {
        const auto v = check_multiplicative(op, pair, sampling::random_element(op, config.seed, i));
        worst = std::max(worst, -v.slack / std::max(1.0, v.rhs));
      }
      rows.push_back(at_most("multiplicative", name + " " + pair_label(order) + " worst relative violation",
                             worst, kVerdictTolerance));

      double jensen = 0.0;
      for (std::size_t j = 0; j < op.size(); ++j) {
        CoeffVector c(op.size());
        c[j] = 1.0;
        const auto v = check_multiplicative(op, pair, SpectralElement(op, std::move(c)));
        jensen = std::max(jensen, std::abs(v.slack) / std::max(1.0, v.rhs));
      }
      rows.push_back(at_most("multiplicative", name + " " + pair_label(order) + " single-atom |slack|", jensen, 1e-12));
    }
  }
  return rows;
}

inline std::vector<CheckRow> additive(const Config& config) {
  std::vector<CheckRow> rows;
  const auto ops = sweep_operators(config.seed);
  for (const auto& [name, op] : ops) {
    for (const auto& order : pairs_for(config)) {
      const auto pair = power_pair(order.k, order.r);
      double worst = 0.0;
      for (std::size_t i = 0; i < config.trials; ++i) {
        const double b = sampling::uniform(config.seed ^ 0xadd, i, 0.1, 10.0);
        const auto v = check_additive(op, pair, sampling::random_element(op, config.seed, i), b);
        worst = std::max(worst, -v.slack / std::max(1.0, v.rhs));
      }
      rows.push_back(
          at_most("additive", name + " " + pair_label(order) + " worst relative violation", worst, kVerdictTolerance));
    }
  }
  const PowerOrder order = config.power.value_or(PowerOrder{1, 2});
  const auto pair = power_pair(order.k, order.r);
  for (double b : {1.0, 2.0}) {
    const auto op = spectrum_containing(power_maximizer(order, b), b);
    const auto probe = additive_sharpness_probe(op, pair, b, 0.01);
    rows.push_back(at_least("additive", "sharpness probe " + pair_label(order) + " b=" + io_number(b),
                            probe.achieved / probe.slope, 0.98));
  }
  return rows;
}

inline std::vector<CheckRow> stechkin(const Config& config) {
  std::vector<CheckRow> rows;
  {
    const auto pair = power_pair(1, 2);
    double worst = 0.0;
    for (double b : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const auto bundle = operator_budget(pair, b);
      worst = std::max(worst, std::abs(best_approx_value(pair, b) - 1.0 / (4.0 * bundle.budget)));
    }
    rows.push_back(at_most("stechkin", "(1,2) E = 1/(4N) max abs error", worst, 1e-8));
  }
  {
    const double n1 = operator_budget(power_pair(1, 3), 1.0).budget;
    rows.push_back(at_most("stechkin", "(1,3) N(1) vs 2/(3 sqrt 3)", std::abs(n1 - 2.0 / (3.0 * std::sqrt(3.0))), 1e-10));
  }
  for (const auto& order : pairs_for(config)) {
    const auto pair = power_pair(order.k, order.r);
    double closed = 0.0;
    double roundtrip = 0.0;
    bool increasing = true;
    double prev = 0.0;
    for (double b = 0.125; b <= 64.0; b *= 2.0) {
      const auto bundle = operator_budget(pair, b);
      closed = std::max(closed, std::abs(bundle.budget - power_budget(order, b)) / power_budget(order, b));
      roundtrip = std::max(roundtrip, std::abs(solve_budget(pair, bundle.budget).b - b) / b);
      increasing = increasing && bundle.budget > prev;
      prev = bundle.budget;
    }
    rows.push_back(at_most("stechkin", pair_label(order) + " N(b) vs closed form", closed, 1e-10));
    rows.push_back(at_most("stechkin", pair_label(order) + " solve_budget round trip", roundtrip, 1e-8));
    rows.push_back({"stechkin", pair_label(order) + " N(b) strictly increasing", increasing ? 1.0 : 0.0, 1.0, increasing});
  }
  {
    const PowerOrder order = config.power.value_or(PowerOrder{1, 2});
    const auto pair = power_pair(order.k, order.r);
    const double b = 2.0;
    const auto bundle = operator_budget(pair, b);
    const auto op = spectrum_containing(power_maximizer(order, b), b);
    double norm_ratio = 0.0;
    double deviation = 0.0;
    for (std::size_t i = 0; i < config.trials; ++i) {
      auto x = sampling::random_element(op, config.seed, i);
      x = Complex(1.0 / x.norm()) * x;
      norm_ratio = std::max(norm_ratio, apply_truncated(op, pair, b, x).norm() / bundle.budget);
      const double g = modulus_norm(op, pair.psi, x);
      if (g > 0.0) x = Complex(1.0 / g) * x;
      deviation = std::max(deviation, (apply_phi(op, pair, x) - apply_truncated(op, pair, b, x)).norm() / bundle.slope);
    }
    rows.push_back(at_most("stechkin", "operator norm ||phi_b(A)x|| / N(b)", norm_ratio, 1.0 + 1e-10));
    rows.push_back(at_most("stechkin", "deviation ||phi(A)x - phi_b(A)x|| / slope", deviation, 1.0 + 1e-10));
    const auto witness = band_element(op, bundle.maximizer * (1.0 - 1e-9), bundle.maximizer * (1.0 + kMaximizerResolution), 1.0);
    rows.push_back(at_least("stechkin", "maximizer atom attains N(b)", apply_truncated(op, pair, b, witness).norm() / bundle.budget,
                            1.0 - 1e-8));
  }
  return rows;
}

inline std::vector<CheckRow> duality(const Config& config) {
  std::vector<CheckRow> rows;
  for (const auto& order : pairs_for(config)) {
    const auto pair = power_pair(order.k, order.r);
    for (double b : config.b_grid) {
      const auto bundle = operator_budget(pair, b);
      const double lower = stechkin_lower_bound(*pair.link, bundle.budget);
      rows.push_back(at_most("duality", pair_label(order) + " b=" + io_number(b) + " |Delta(N(b)) - E|",
                             std::abs(lower - best_approx_value(pair, b)), 1e-8));
    }
  }
  return rows;
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return out;
}

inline std::vector<CheckRow> theorem8(const Config& config) {
  std::vector<CheckRow> rows;
  const auto deltas = log_grid(std::pow(2.0, -8), 8.0, 50);
  for (const auto& order : pairs_for(config)) {
    const auto pair = power_pair(order.k, order.r);
    double gap = 0.0;
    double bstar = 0.0;
    for (double delta : deltas) {
      const double omega = modulus_of_continuity(*pair.link, delta);
      const auto plan = l_delta(pair, delta);
      gap = std::max(gap, std::abs(omega - plan.value) / omega);
      if (order.k == 1 && order.r == 2) {
        const double expected = 2.0 / std::sqrt(delta);
        bstar = std::max(bstar, std::abs(plan.b_star - expected) / expected);
      }
    }
    rows.push_back(at_most("theorem8", pair_label(order) + " max |omega - l| / omega", gap, kIdentityTolerance));
    if (order.k == 1 && order.r == 2) {
      rows.push_back(at_most("theorem8", "(1,2) b* vs 2/sqrt(delta)", bstar, 1e-6));
    }
  }
  return rows;
}

inline std::vector<CheckRow> classes(const Config& config) {
  std::vector<CheckRow> rows;
  const auto ops = sweep_operators(config.seed);
  for (const auto& order : pairs_for(config)) {
    const auto pair = power_pair(order.k, order.r);
    bool all_pass = true;
    double membership = 0.0;
    double distance = 0.0;
    for (std::size_t i = 0; i < config.trials; ++i) {
      const auto& op = ops[i % ops.size()].op;
      const double b = sampling::uniform(config.seed ^ 0xc1a55, i, 0.1, 10.0);
      auto x = sampling::random_element(op, config.seed, i);
      const double g = ratio_gauge(op, pair, x);
      const double scale = sampling::uniform(config.seed ^ 0x5ca1e, i, 0.0, 1.0);
      x = Complex(g > 0.0 ? scale / g : 1.0) * x;
      const auto proj = project_to_homothet(op, pair, b, x);
      all_pass = all_pass && proj.pass;
      if (proj.budget > 0.0) membership = std::max(membership, proj.membership_lhs / proj.budget);
      distance = std::max(distance, proj.distance_lhs / proj.slope);
    }
    rows.push_back(at_most("classes", pair_label(order) + " membership ||psi(A)y|| / N(b)", membership, 1.0 + kClassTolerance));
    rows.push_back(at_most("classes", pair_label(order) + " distance ||x - y|| / slope", distance, 1.0 + kClassTolerance));
    rows.push_back({"classes", pair_label(order) + " certificates pass", all_pass ? 1.0 : 0.0, 1.0, all_pass});

    double consistency = 0.0;
    for (double b : config.b_grid) consistency = std::max(consistency, std::abs(class_approx_value(pair, b) - best_approx_value(pair, b)));
    rows.push_back(at_most("classes", pair_label(order) + " class value == stechkin value", consistency, 0.0));
  }
  const PowerOrder order = config.power.value_or(PowerOrder{1, 2});
  const auto pair = power_pair(order.k, order.r);
  for (double b : {1.0, 2.0}) {
    const auto op = spectrum_containing(power_maximizer(order, b), b);
    const auto probe = class_sharpness_probe(op, pair, b, 0.01);
    rows.push_back(at_least("classes", "sharpness probe " + pair_label(order) + " b=" + io_number(b),
                            probe.achieved / probe.slope, 0.98));
  }
  return rows;
}

inline std::vector<CheckRow> recovery(const Config& config) {
  std::vector<CheckRow> rows;
  const auto op = from_fourier_grid(4096, 2.0 * std::numbers::pi * 100.0);
  {
    const auto pair = power_pair(1, 2);
    const double delta = 0.25;
    const auto plan = l_delta(pair, delta);
    rows.push_back(at_most("recovery", "(1,2) delta=0.25 |b* - 4| / 4", std::abs(plan.b_star - 4.0) / 4.0, 1e-6));
    const auto report = deviation_with_noise(op, pair, plan.b_star, delta, config.trials, config.seed);
    rows.push_back(at_most("recovery", "(1,2) delta=0.25 empirical sup", report.empirical_sup, 0.5 * (1.0 + 1e-8)));
    rows.push_back(at_least("recovery", "(1,2) delta=0.25 adversarial witness", report.witness.value_or(0.0), 0.49));
  }
  for (const auto& order : pairs_for(config)) {
    const auto pair = power_pair(order.k, order.r);
    const double delta = 0.25;
    const auto plan = l_delta(pair, delta);
    const double omega = modulus_of_continuity(*pair.link, delta);
    const auto report = deviation_with_noise(op, pair, plan.b_star, delta, std::min<std::size_t>(config.trials, 200),
                                             config.seed);
    rows.push_back(at_most("recovery", pair_label(order) + " empirical U / omega", report.empirical_sup / omega, 1.0 + 1e-8));

    // recover is linear in the data
    const auto a = sampling::random_element(op, config.seed, 1);
    const auto c = sampling::random_element(op, config.seed, 2);
    const Complex alpha{0.7, -1.3};
    const auto lhs = recover(op, pair, delta, alpha * a + c);
    const auto rhs = alpha * recover(op, pair, delta, a) + recover(op, pair, delta, c);
    rows.push_back(at_most("recovery", pair_label(order) + " recover linearity", (lhs - rhs).norm() / std::max(1.0, lhs.norm()), 1e-12));
  }
  return rows;
}

inline std::vector<CheckRow> omega(const Config& config) {
  std::vector<CheckRow> rows;
  for (const auto& order : pairs_for(config)) {
    const auto pair = power_pair(order.k, order.r);
    double worst = 0.0;
    for (double delta : log_grid(1e-3, 1e3, 50)) {
      const double expected = std::pow(delta, 1.0 - order.k / order.r);
      worst = std::max(worst, std::abs(modulus_of_continuity(*pair.link, delta) - expected) / std::max(1.0, expected));
    }
    rows.push_back(at_most("omega", pair_label(order) + " omega vs delta^(1-k/r)", worst, 1e-12));
  }
  const auto op = from_fourier_grid(4096, 2.0 * std::numbers::pi * 100.0);
  const auto pair = power_pair(1, 2);
  double ratio = 1.0;
  for (double delta : log_grid(0.01, 0.5, 20)) {
    const auto x = extremal_element(op, pair, delta, 0.01);
    ratio = std::min(ratio, modulus_norm(op, pair.phi, x) / modulus_of_continuity(*pair.link, delta));
  }
  rows.push_back(at_least("omega", "(1,2) extremal element ||phi(A)x|| / omega, eps=0.01", ratio, 0.99));
  return rows;
}

inline std::vector<CheckRow> symbols_suite(const Config& config) {
  std::vector<CheckRow> rows;
  for (const auto& order : pairs_for(config)) {
    const auto report = validate_pair(power_pair(order.k, order.r));
    rows.push_back({"symbols", pair_label(order) + " hypotheses", report.all_passed() ? 1.0 : 0.0, 1.0, report.all_passed()});
  }
  const auto link = derive_link(symbols::power(1), symbols::power(2));
  double worst = 0.0;
  for (double v : log_grid(1e-6, 1e6, 200)) worst = std::max(worst, std::abs(link(v) - std::sqrt(v)) / std::sqrt(v));
  rows.push_back(at_most("symbols", "derived link vs sqrt(v)", worst, 1e-8));
  bool rejected = false;
  try {
    derive_link(symbols::power(2), symbols::power(1));
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::NotConcaveLink;
  }
  rows.push_back({"symbols", "convex link rejected", rejected ? 1.0 : 0.0, 1.0, rejected});
  return rows;
}

using Suite = std::function<std::vector<CheckRow>(const Config&)>;

inline std::vector<std::pair<std::string, Suite>> suites() {
  return {{"symbols", symbols_suite}, {"omega", omega},       {"multiplicative", multiplicative},
          {"additive", additive},     {"stechkin", stechkin}, {"duality", duality},
          {"theorem8", theorem8},     {"classes", classes},   {"recovery", recovery}};
}

inline std::vector<CheckRow> run(const std::string& name, const Config& config) {
  std::vector<CheckRow> rows;
  for (const auto& [suite_name, suite] : suites()) {
    if (name == "all" || name == suite_name) {
      auto part = suite(config);
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  if (rows.empty() && name != "all") fail(ErrorKind::InvalidArgument, "unknown suite '" + name + "'");
  return rows;
}

}  // namespace opineq::verify
