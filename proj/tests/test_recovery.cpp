#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "opineq/recovery.hpp"
#include "opineq/sampling.hpp"

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

TEST_CASE("l_delta examples") {
  const auto pair = power_pair(1, 2);
  const auto quarter = l_delta(pair, 0.25);
  CHECK_THAT(quarter.b_star, WithinRel(4.0, 1e-6));
  CHECK_THAT(quarter.value, WithinRel(0.5, 1e-12));
  const auto one = l_delta(pair, 1.0);
  CHECK_THAT(one.b_star, WithinRel(2.0, 1e-6));
  CHECK_THAT(one.value, WithinRel(1.0, 1e-12));

  double prev = INFINITY;
  for (double d : {1e-2, 1e-4, 1e-6}) {
    const double v = l_delta(pair, d).value;
    CHECK(v < prev);
    prev = v;
  }
  CHECK(kind_of([&] { l_delta(pair, 0.0); }) == ErrorKind::InvalidDelta);
  // b* = 2 / sqrt(delta) leaves [1e-6, 1e6] for tiny delta.
  CHECK(kind_of([&] { l_delta(pair, 1e-14); }) == ErrorKind::BracketExhausted);
}

TEST_CASE("recovery_value examples") {
  CHECK(recovery_value(power_pair(1, 2), 0.25) == 0.5);
  CHECK(kind_of([] { recovery_value(make_pair(symbols::power(2), symbols::power(1)), 0.25); }) ==
        ErrorKind::NotConcaveLink);
}

TEST_CASE("recover examples") {
  const auto pair = power_pair(1, 2);
  const auto op = from_fourier_grid(256, 2.0 * std::numbers::pi);
  const double delta = 0.25;
  const auto plan = l_delta(pair, delta);

  // zero signal: output is phi_b*(A) eta, bounded by N(b*) delta <= omega
  for (std::uint64_t i = 0; i < 50; ++i) {
    auto eta = sampling::random_element(op, 3, i);
    eta = Complex(delta / eta.norm()) * eta;
    const double out = recover(op, pair, delta, eta).norm();
    CHECK(out <= plan.bundle.budget * delta * (1.0 + 1e-12));
    CHECK(out <= modulus_of_continuity(*pair.link, delta));
  }

  // noiseless: error vanishes once b* covers the spectrum
  const auto small = from_eigenvalues({-2.0, -0.5, 0.0, 1.0, 3.0});
  const auto x = SpectralElement(small, {0.1, 0.2, 0.3, 0.4, 0.05});
  CHECK((recover(small, pair, 0.0, x) - apply_phi(small, pair, x)).norm() == 0.0);
  double prev = INFINITY;
  for (double d : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double err = (recover(small, pair, d, x) - apply_phi(small, pair, x)).norm();
    CHECK(err <= prev);
    prev = err;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("recover against an extremal element with aligned noise") {
  const auto pair = power_pair(1, 2);
  const auto op = from_fourier_grid(4096, 2.0 * std::numbers::pi * 100.0);
  const double delta = 0.25;
  const double eps = 0.01;
  const auto x = extremal_element(op, pair, delta, eps);
  const auto plan = l_delta(pair, delta);
  const auto eta = x + detail::aligned_noise(op, pair, plan.b_star, delta, x);
  const double err = (apply_phi(op, pair, x) - recover(op, pair, delta, eta)).norm();
  CHECK(err <= 0.5 * (1.0 + 1e-8));
  CHECK(err >= 0.5 * (1.0 - eps - 0.01));
}

TEST_CASE("deviation_with_noise: optimal method at delta = 0.25") {
  const auto pair = power_pair(1, 2);
  const auto op = from_fourier_grid(4096, 2.0 * std::numbers::pi * 100.0);
  const auto r = deviation_with_noise(op, pair, 4.0, 0.25, 1000, 42);
  CHECK(r.empirical_sup <= 0.5 * (1.0 + 1e-8));
  REQUIRE(r.witness);
  CHECK(*r.witness >= 0.5 * (1.0 - 0.02));
  CHECK_THAT(r.analytic_cap, WithinAbs(0.5, 1e-15));

  const auto again = deviation_with_noise(op, pair, 4.0, 0.25, 1000, 42);
  CHECK(again.empirical_sup == r.empirical_sup);
  CHECK(again.witness == r.witness);
}

TEST_CASE("deviation_with_noise argument checks") {
  const auto pair = power_pair(1, 2);
  const auto op = from_eigenvalues({1.0, 2.0});
  CHECK(kind_of([&] { deviation_with_noise(op, pair, 0.0, 0.1, 10, 1); }) == ErrorKind::DegenerateCut);
  CHECK(kind_of([&] { deviation_with_noise(op, pair, 1.0, -0.1, 10, 1); }) == ErrorKind::InvalidDelta);
  CHECK(kind_of([&] { deviation_with_noise(op, pair, 1.0, 0.1, 0, 1); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("property: omega = l across delta for the power pairs") {
  for (const auto& pair : {power_pair(1, 2), power_pair(1, 3), power_pair(2, 3)}) {
    for (double d = std::pow(2.0, -8); d <= 8.0; d *= 1.5) {
      const double omega = modulus_of_continuity(*pair.link, d);
      CHECK(std::abs(l_delta(pair, d).value - omega) <= 1e-6 * omega);
    }
  }
}

TEST_CASE("property: l non-decreasing and b* non-increasing in delta") {
  for (const auto& pair : {power_pair(1, 2), power_pair(1, 3), power_pair(2, 3)}) {
    double prev_l = 0.0;
    double prev_b = INFINITY;
    for (double d = 1e-3; d <= 8.0; d *= 1.7) {
      const auto plan = l_delta(pair, d);
      CHECK(plan.value >= prev_l);
      CHECK(plan.b_star <= prev_b * (1.0 + 1e-6));
      prev_l = plan.value;
      prev_b = plan.b_star;
    }
  }
}

TEST_CASE("property: sandwich of the empirical error") {
  const auto op = from_fourier_grid(4096, 2.0 * std::numbers::pi * 100.0);
  for (const auto& pair : {power_pair(1, 2), power_pair(1, 3), power_pair(2, 3)}) {
    for (double d : {0.1, 0.25, 0.6}) {
      const auto plan = l_delta(pair, d);
      const double omega = modulus_of_continuity(*pair.link, d);
      const auto r = deviation_with_noise(op, pair, plan.b_star, d, 100, 7);
      CHECK(r.empirical_sup <= omega * (1.0 + 1e-8));
      CHECK(r.empirical_sup >= omega * 0.95);
    }
  }
}

TEST_CASE("property: recover is linear in the data") {
  const auto op = from_hermitian(sampling::random_hermitian(16, 5, 3.0));
  const auto pair = power_pair(1, 3);
  for (std::uint64_t i = 0; i < 100; ++i) {
    const auto a = sampling::random_element(op, 1, i);
    const auto c = sampling::random_element(op, 2, i);
    const Complex alpha(sampling::uniform(3, i, -3, 3), sampling::uniform(4, i, -3, 3));
    const auto lhs = recover(op, pair, 0.3, alpha * a + c);
    const auto rhs = alpha * recover(op, pair, 0.3, a) + recover(op, pair, 0.3, c);
    CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, lhs.norm()));
  }
}
