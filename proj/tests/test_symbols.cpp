#include <catch_amalgamated.hpp>

#include <cmath>

#include "opineq/sampling.hpp"
#include "opineq/symbols.hpp"

using namespace opineq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an opineq::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("power_pair order checks") {
  CHECK(kind_of([] { power_pair(2, 2); }) == ErrorKind::InvalidOrder);
  CHECK(kind_of([] { power_pair(3, 2); }) == ErrorKind::InvalidOrder);
  CHECK(kind_of([] { power_pair(0, 2); }) == ErrorKind::InvalidOrder);
  const auto p = power_pair(1, 2);
  REQUIRE(p.link);
  CHECK((*p.link)(16.0) == 4.0);
  CHECK(p.ratio_nonincreasing);
  CHECK(p.ratio_at_zero == 0.0);
}

TEST_CASE("inverse_modulus examples") {
  CHECK_THAT(inverse_modulus(symbols::power(2), 4.0), WithinRel(2.0, 1e-12));
  CHECK_THAT(inverse_modulus(symbols::power(3), 8.0), WithinRel(2.0, 1e-12));
  CHECK(inverse_modulus(symbols::power(2), 0.0) == 0.0);
  // The returned t reaches y, so an atom at sqrt 2 is never missed.
  const double t = inverse_modulus(symbols::power(2), 2.0);
  CHECK(t * t >= 2.0);
  CHECK_THAT(t, WithinRel(std::sqrt(2.0), 1e-12));
}

TEST_CASE("inverse_modulus out of range") {
  CHECK(kind_of([] { inverse_modulus(symbols::power(2), 1e30); }) == ErrorKind::OutOfRange);
  Symbol bounded = symbols::power(1);
  bounded.name = "atan";
  bounded.modulus = [](double u) { return std::atan(u); };
  bounded.tends_to_infinity = false;
  CHECK(kind_of([&] { inverse_modulus(bounded, 2.0); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([] { inverse_modulus(symbols::power(2), -1.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("derive_link: identity for phi = psi") {
  const auto link = derive_link(symbols::power(1), symbols::power(1));
  CHECK(link.provenance == LinkProvenance::derived_from_pair);
  for (double v : {0.0, 1e-4, 0.5, 3.0, 1e5}) CHECK_THAT(link(v), WithinAbs(v, 1e-9 * std::max(1.0, v)));
}

TEST_CASE("derive_link: convex v^2 is rejected") {
  CHECK(kind_of([] { derive_link(symbols::power(2), symbols::power(1)); }) == ErrorKind::NotConcaveLink);
}

TEST_CASE("derive_link matches the closed form on power pairs") {
  const auto link = derive_link(symbols::power(1), symbols::power(3));
  for (double v : {1e-3, 0.1, 2.0, 50.0, 1e4}) CHECK_THAT(link(v), WithinRel(std::cbrt(v), 1e-10));
}

TEST_CASE("derive_link on registry symbols") {
  // |log1p|^2 = F(|expm1|^2) with F(v) = log(1 + log(1 + sqrt v))^2 is concave.
  const auto link = derive_link(symbols::log1p_abs(), symbols::exp_abs());
  const double v = 9.0;
  CHECK_THAT(link(v), WithinRel(std::pow(std::log1p(std::log1p(3.0)), 2), 1e-10));
}

TEST_CASE("validate_pair examples") {
  const auto report = validate_pair(power_pair(1, 2));
  CHECK(report.all_passed());
  CHECK(report.warnings.empty());
  for (const char* name : {"phi_even", "psi_even", "phi_increasing", "psi_increasing", "ratio_nonincreasing",
                           "link_zero", "link_increasing", "link_concave", "link_consistent"}) {
    INFO(name);
    REQUIRE(report.find(name) != nullptr);
    CHECK(report.find(name)->passed);
  }

  const auto bad = make_pair(symbols::power(2), symbols::power(1));
  CHECK_FALSE(bad.ratio_nonincreasing);
  CHECK_FALSE(bad.link);
  const auto bad_report = validate_pair(bad);
  CHECK_FALSE(bad_report.find("ratio_nonincreasing")->passed);
  CHECK_FALSE(bad_report.find("link_concave")->passed);
}

TEST_CASE("validate_pair warns on incoherent phase") {
  const auto pair = make_pair(symbols::signed_power(1), symbols::power(2));
  const auto report = validate_pair(pair);
  CHECK(report.all_passed());
  CHECK_FALSE(report.warnings.empty());
}

TEST_CASE("make_pair infers the ratio extension at zero") {
  CHECK(make_pair(symbols::power(1), symbols::power(2)).ratio_at_zero == 0.0);
  CHECK(make_pair(symbols::power(1), symbols::power(1)).ratio_at_zero == 1.0);
  CHECK_FALSE(make_pair(symbols::log1p_abs(), symbols::exp_abs()).ratio_at_zero.has_value());
  PairOptions opts;
  opts.ratio_at_zero = 1.0;
  CHECK(make_pair(symbols::log1p_abs(), symbols::exp_abs(), opts).ratio_at_zero == 1.0);
}

TEST_CASE("registry lookup") {
  CHECK(symbols::by_name("power:2.5").abs_at(-2.0) == std::pow(2.0, 2.5));
  CHECK_THAT(symbols::by_name("exp_abs").abs_at(1.0), WithinRel(std::expm1(1.0), 1e-15));
  CHECK_THAT(symbols::by_name("log1p_abs").abs_at(-1.0), WithinRel(std::log1p(1.0), 1e-15));
  CHECK(kind_of([] { symbols::by_name("power:x"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { symbols::by_name("sinc"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { symbols::by_name("power:-1"); }) == ErrorKind::InvalidOrder);
}

TEST_CASE("slope rejects degenerate cuts") {
  const auto p = power_pair(1, 2);
  CHECK(p.slope(2.0) == 0.5);
  CHECK(kind_of([&] { p.slope(0.0); }) == ErrorKind::DegenerateCut);
  CHECK_NOTHROW(make_pair(symbols::power(1), symbols::power(1)).require_link());
  CHECK(kind_of([] { make_pair(symbols::power(2), symbols::power(1)).require_link(); }) == ErrorKind::NotConcaveLink);
}

TEST_CASE("property: inverse_modulus round-trips the modulus") {
  for (const auto& s : {symbols::power(1), symbols::power(2.5), symbols::exp_abs(), symbols::log1p_abs()}) {
    const double top = std::min(s.t_max, 1e3);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
      const double t = sampling::uniform(17, i, 0.0, top);
      worst = std::max(worst, std::abs(inverse_modulus(s, s.modulus(t)) - t) / std::max(1.0, t));
    }
    INFO(s.name);
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("property: power links are multiplicative") {
  for (const auto& [k, r] : std::vector<std::pair<double, double>>{{1, 2}, {1, 3}, {2, 3}, {0.5, 4}}) {
    const auto link = *power_pair(k, r).link;
    for (std::uint64_t i = 0; i < 500; ++i) {
      const double v = std::exp(sampling::uniform(3, i, std::log(1e-3), std::log(1e3)));
      const double w = std::exp(sampling::uniform(4, i, std::log(1e-3), std::log(1e3)));
      CHECK(std::abs(link(v * w) - link(v) * link(w)) <= 1e-10 * std::max(1.0, link(v * w)));
    }
  }
}

TEST_CASE("property: validate_pair is deterministic") {
  const auto pair = make_pair(symbols::log1p_abs(), symbols::exp_abs());
  const auto a = validate_pair(pair);
  const auto b = validate_pair(pair);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].passed == b.checks[i].passed);
    CHECK(a.checks[i].worst_violation == b.checks[i].worst_violation);
  }
  CHECK(a.warnings == b.warnings);
}
