#pragma once

// Seeded generators for test operators and elements. Every draw is a pure
// function of (seed, index) so sweeps are reproducible in any order.

#include <cstddef>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "opineq/spectral.hpp"

namespace opineq::sampling {

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

/// (G + G*) / 2 with standard complex Gaussian G, scaled by `scale`.
inline Eigen::MatrixXcd random_hermitian(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  auto rng = stream(seed, 0);
  std::normal_distribution<double> gauss;
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd g(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) g(r, c) = {gauss(rng), gauss(rng)};
  }
  return 0.5 * scale * (g + g.adjoint());
}

/// Random element: dense Gaussian coefficients, a single atom, or a sparse
/// handful of atoms, chosen with probabilities 1/2, 1/4, 1/4.
inline SpectralElement random_element(const SpectralOperator& op, std::uint64_t seed, std::uint64_t index) {
  auto rng = stream(seed, index);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<std::size_t> pick(0, op.size() - 1);
  CoeffVector c(op.size());
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0:
      c[pick(rng)] = {gauss(rng), gauss(rng)};
      break;
    case 1:
      for (int k = 0; k < 3; ++k) c[pick(rng)] = {gauss(rng), gauss(rng)};
      break;
    default:
      for (auto& v : c) v = {gauss(rng), gauss(rng)};
  }
  SpectralElement x(op, std::move(c));
  if (x.is_zero()) return random_element(op, seed, index + 0x9e3779b97f4a7c15ULL);
  return x;
}

inline double uniform(std::uint64_t seed, std::uint64_t index, double lo, double hi) {
  auto rng = stream(seed, index);
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace opineq::sampling
