#pragma once

// Self-adjoint operators in diagonal (spectral) form and the functional
// calculus c_j -> g(lambda_j) c_j that realizes g(A) on a finite spectrum.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "opineq/error.hpp"

namespace opineq {

using Complex = std::complex<double>;
using CoeffVector = std::vector<Complex>;

/// Hermitian inputs must satisfy max|M - M*| <= this.
inline constexpr double kHermitianTolerance = 1e-12;
/// Atoms closer than this are reported as one in spectral_measure.
inline constexpr double kAtomMergeTolerance = 1e-12;

enum class Origin { explicit_points, hermitian, fourier_grid };

constexpr std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::explicit_points: return "explicit";
    case Origin::hermitian: return "hermitian";
    case Origin::fourier_grid: return "fourier_grid";
  }
  return "explicit";
}

namespace detail {

inline std::uint64_t next_operator_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

// Column j of U is the basis vector e_{source[j]}.
struct Permutation {
  std::vector<std::size_t> source;
};

// Column m of U is exp(i w_m t_j) / sqrt(n) sampled on t_j = j L / n.
struct FourierBasis {
  std::size_t n;
  double period;
};

using Transform = std::variant<std::monostate, Permutation, Eigen::MatrixXcd, FourierBasis>;

}  // namespace detail

/// A self-adjoint operator A = U diag(points) U*, with points ascending.
///
/// Copies share the same immutable state and therefore the same identity;
/// elements remember the identity of the operator they were built for.
class SpectralOperator {
 public:
  std::span<const double> points() const { return state_->points; }
  std::size_t size() const { return state_->points.size(); }
  Origin origin() const { return state_->origin; }
  std::uint64_t id() const { return state_->id; }

  /// False when U is the identity.
  bool has_transform() const {
    return !std::holds_alternative<std::monostate>(state_->transform);
  }

  /// Materialized unitary U (identity when no transform is stored).
  Eigen::MatrixXcd transform() const {
    const auto n = static_cast<Eigen::Index>(size());
    return std::visit(
        [n](const auto& t) -> Eigen::MatrixXcd {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, std::monostate>) {
            return Eigen::MatrixXcd::Identity(n, n);
          } else if constexpr (std::is_same_v<T, detail::Permutation>) {
            Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
            for (Eigen::Index j = 0; j < n; ++j) {
              u(static_cast<Eigen::Index>(t.source[static_cast<std::size_t>(j)]), j) = 1.0;
            }
            return u;
          } else if constexpr (std::is_same_v<T, Eigen::MatrixXcd>) {
            return t;
          } else {
            Eigen::MatrixXcd u(n, n);
            for (Eigen::Index m = 0; m < n; ++m) {
              for (Eigen::Index j = 0; j < n; ++j) {
                u(j, m) = fourier_entry(t, j, m);
              }
            }
            return u;
          }
        },
        state_->transform);
  }

  /// Coefficients of a user-basis vector in the diagonal basis (U* v).
  CoeffVector to_diagonal(std::span<const Complex> user) const {
    check_length(user.size());
    const std::size_t n = size();
    CoeffVector out(n);
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, std::monostate>) {
            std::copy(user.begin(), user.end(), out.begin());
          } else if constexpr (std::is_same_v<T, detail::Permutation>) {
            for (std::size_t j = 0; j < n; ++j) out[j] = user[t.source[j]];
          } else if constexpr (std::is_same_v<T, Eigen::MatrixXcd>) {
            for (std::size_t j = 0; j < n; ++j) {
              Complex acc{};
              for (std::size_t i = 0; i < n; ++i) {
                acc += std::conj(t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) * user[i];
              }
              out[j] = acc;
            }
          } else {
            for (std::size_t m = 0; m < n; ++m) {
              Complex acc{};
              for (std::size_t j = 0; j < n; ++j) {
                acc += std::conj(fourier_entry(t, static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m))) *
                       user[j];
              }
              out[m] = acc;
            }
          }
        },
        state_->transform);
    return out;
  }

  /// Inverse of to_diagonal (U c).
  CoeffVector to_user(std::span<const Complex> coeffs) const {
    check_length(coeffs.size());
    const std::size_t n = size();
    CoeffVector out(n);
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, std::monostate>) {
            std::copy(coeffs.begin(), coeffs.end(), out.begin());
          } else if constexpr (std::is_same_v<T, detail::Permutation>) {
            for (std::size_t j = 0; j < n; ++j) out[t.source[j]] = coeffs[j];
          } else if constexpr (std::is_same_v<T, Eigen::MatrixXcd>) {
            for (std::size_t i = 0; i < n; ++i) {
              Complex acc{};
              for (std::size_t j = 0; j < n; ++j) {
                acc += t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * coeffs[j];
              }
              out[i] = acc;
            }
          } else {
            for (std::size_t j = 0; j < n; ++j) {
              Complex acc{};
              for (std::size_t m = 0; m < n; ++m) {
                acc += fourier_entry(t, static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m)) * coeffs[m];
              }
              out[j] = acc;
            }
          }
        },
        state_->transform);
    return out;
  }

  friend SpectralOperator from_eigenvalues(std::span<const double> points);
  friend SpectralOperator from_hermitian(const Eigen::MatrixXcd& matrix);
  friend SpectralOperator from_fourier_grid(std::size_t n, double period);
  friend SpectralOperator from_parts(std::vector<double> points, std::optional<Eigen::MatrixXcd> transform,
                                     Origin origin);

 private:
  struct State {
    std::vector<double> points;
    detail::Transform transform;
    Origin origin;
    std::uint64_t id;
  };

  explicit SpectralOperator(std::shared_ptr<const State> state) : state_(std::move(state)) {}

  static SpectralOperator make(std::vector<double> points, detail::Transform transform, Origin origin) {
    return SpectralOperator(std::make_shared<const State>(
        State{std::move(points), std::move(transform), origin, detail::next_operator_id()}));
  }

  static Complex fourier_entry(const detail::FourierBasis& f, Eigen::Index j, Eigen::Index m) {
    const auto n = static_cast<double>(f.n);
    const auto lo = static_cast<long long>(f.n / 2);
    const double freq = 2.0 * std::numbers::pi * static_cast<double>(static_cast<long long>(m) - lo) / f.period;
    const double t = static_cast<double>(j) * f.period / n;
    return std::polar(1.0 / std::sqrt(n), freq * t);
  }

  void check_length(std::size_t n) const {
    if (n != size()) {
      fail(ErrorKind::BindingError,
           "vector length " + std::to_string(n) + " does not match operator size " + std::to_string(size()));
    }
  }

  std::shared_ptr<const State> state_;
};

/// Coefficients of an element x in the diagonal basis of one operator.
class SpectralElement {
 public:
  SpectralElement(const SpectralOperator& op, CoeffVector coeffs)
      : operator_id_(op.id()), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != op.size()) {
      fail(ErrorKind::BindingError, "element length " + std::to_string(coeffs_.size()) +
                                        " does not match operator size " + std::to_string(op.size()));
    }
  }

  static SpectralElement zero(const SpectralOperator& op) { return {op, CoeffVector(op.size())}; }

  /// Element from a user-basis vector.
  static SpectralElement from_user(const SpectralOperator& op, std::span<const Complex> user) {
    return {op, op.to_diagonal(user)};
  }

  std::span<const Complex> coeffs() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  std::uint64_t operator_id() const { return operator_id_; }
  bool bound_to(const SpectralOperator& op) const { return operator_id_ == op.id(); }

  double norm_squared() const {
    double acc = 0.0;
    for (const auto& c : coeffs_) acc += std::norm(c);
    return acc;
  }
  double norm() const { return std::sqrt(norm_squared()); }
  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) { return c == Complex{}; });
  }

  friend SpectralElement operator+(const SpectralElement& a, const SpectralElement& b) {
    return combine(a, b, 1.0);
  }
  friend SpectralElement operator-(const SpectralElement& a, const SpectralElement& b) {
    return combine(a, b, -1.0);
  }
  friend SpectralElement operator*(Complex alpha, const SpectralElement& x) {
    SpectralElement out = x;
    for (auto& c : out.coeffs_) c *= alpha;
    return out;
  }

 private:
  SpectralElement(std::uint64_t id, CoeffVector coeffs) : operator_id_(id), coeffs_(std::move(coeffs)) {}

  static SpectralElement combine(const SpectralElement& a, const SpectralElement& b, double sign) {
    if (a.operator_id_ != b.operator_id_ || a.size() != b.size()) {
      fail(ErrorKind::BindingError, "elements belong to different operators");
    }
    CoeffVector out(a.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = a.coeffs_[j] + sign * b.coeffs_[j];
    return {a.operator_id_, std::move(out)};
  }

  std::uint64_t operator_id_;
  CoeffVector coeffs_;
};

inline void require_bound(const SpectralOperator& op, const SpectralElement& x) {
  if (!x.bound_to(op) || x.size() != op.size()) {
    fail(ErrorKind::BindingError, "element is not bound to this operator");
  }
}

inline SpectralOperator from_eigenvalues(std::span<const double> points) {
  if (points.empty()) fail(ErrorKind::EmptySpectrum, "no spectral points");
  for (double p : points) {
    if (!std::isfinite(p)) fail(ErrorKind::InvalidSpectrum, "non-finite spectral point");
  }
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

  std::vector<double> sorted(points.size());
  bool identity = true;
  for (std::size_t j = 0; j < order.size(); ++j) {
    sorted[j] = points[order[j]];
    identity = identity && order[j] == j;
  }
  detail::Transform transform;
  if (!identity) transform = detail::Permutation{std::move(order)};
  return SpectralOperator::make(std::move(sorted), std::move(transform), Origin::explicit_points);
}

inline SpectralOperator from_eigenvalues(std::initializer_list<double> points) {
  return from_eigenvalues(std::span<const double>(points.begin(), points.size()));
}

inline SpectralOperator from_hermitian(const Eigen::MatrixXcd& matrix) {
  if (matrix.rows() != matrix.cols()) fail(ErrorKind::NotSelfAdjoint, "matrix is not square");
  if (matrix.rows() == 0) fail(ErrorKind::EmptySpectrum, "empty matrix");
  if (!matrix.allFinite()) fail(ErrorKind::InvalidSpectrum, "matrix has non-finite entries");
  const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTolerance) {
    fail(ErrorKind::NotSelfAdjoint, "max |M - M*| = " + std::to_string(asym));
  }
  const Eigen::MatrixXcd symmetrized = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(symmetrized);
  if (solver.info() != Eigen::Success) fail(ErrorKind::DecompositionFailure, "eigensolver did not converge");

  const Eigen::VectorXd& values = solver.eigenvalues();
  std::vector<double> points(values.data(), values.data() + values.size());
  return SpectralOperator::make(std::move(points), solver.eigenvectors(), Origin::hermitian);
}

/// Discrete model of -i d/dt on n samples of a function of period L. The
/// spectrum is {2 pi m / L : m = -floor(n/2), ..., ceil(n/2) - 1}.
inline SpectralOperator from_fourier_grid(std::size_t n, double period) {
  if (n == 0) fail(ErrorKind::EmptySpectrum, "fourier grid needs n >= 1");
  if (!(period > 0.0) || !std::isfinite(period)) fail(ErrorKind::InvalidArgument, "period must be positive");
  std::vector<double> points(n);
  const auto lo = static_cast<long long>(n / 2);
  for (std::size_t m = 0; m < n; ++m) {
    points[m] = 2.0 * std::numbers::pi * static_cast<double>(static_cast<long long>(m) - lo) / period;
  }
  return SpectralOperator::make(std::move(points), detail::FourierBasis{n, period}, Origin::fourier_grid);
}

/// Rebuild an operator from serialized parts; used by the JSON reader.
inline SpectralOperator from_parts(std::vector<double> points, std::optional<Eigen::MatrixXcd> transform,
                                   Origin origin) {
  if (points.empty()) fail(ErrorKind::EmptySpectrum, "no spectral points");
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (!std::isfinite(points[j])) fail(ErrorKind::InvalidSpectrum, "non-finite spectral point");
    if (j > 0 && points[j] < points[j - 1]) fail(ErrorKind::InvalidSpectrum, "points must be ascending");
  }
  detail::Transform t;
  if (transform) {
    const auto n = static_cast<Eigen::Index>(points.size());
    if (transform->rows() != n || transform->cols() != n) {
      fail(ErrorKind::InvalidSpectrum, "transform shape does not match point count");
    }
    const double err = (transform->adjoint() * *transform - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (err > 1e-10) fail(ErrorKind::InvalidSpectrum, "transform is not unitary");
    t = std::move(*transform);
  }
  return SpectralOperator::make(std::move(points), std::move(t), origin);
}

/// g(A)x, i.e. coefficients g(lambda_j) c_j. g may return a real or complex value.
template <class G>
SpectralElement apply_symbol(const SpectralOperator& op, G&& g, const SpectralElement& x) {
  require_bound(op, x);
  const auto points = op.points();
  CoeffVector out(points.size());
  const auto coeffs = x.coeffs();
  for (std::size_t j = 0; j < points.size(); ++j) {
    const Complex value = Complex(g(points[j]));
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
      fail(ErrorKind::DomainViolation, "symbol is not finite at spectral point " + std::to_string(points[j]));
    }
    out[j] = value * coeffs[j];
  }
  return {op, std::move(out)};
}

/// ||g(A)x|| computed directly from the measure, without building g(A)x.
template <class G>
double symbol_norm(const SpectralOperator& op, G&& g, const SpectralElement& x) {
  require_bound(op, x);
  const auto points = op.points();
  const auto coeffs = x.coeffs();
  double acc = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (coeffs[j] == Complex{}) continue;
    const double m = std::abs(Complex(g(points[j])));
    if (!std::isfinite(m)) {
      fail(ErrorKind::DomainViolation, "symbol is not finite at spectral point " + std::to_string(points[j]));
    }
    acc += m * m * std::norm(coeffs[j]);
  }
  return std::sqrt(acc);
}

struct Atom {
  double point;
  double mass;
};

/// The scalar measure d(E_t x, x) as a list of atoms, equal points merged.
inline std::vector<Atom> spectral_measure(const SpectralOperator& op, const SpectralElement& x) {
  require_bound(op, x);
  const auto points = op.points();
  const auto coeffs = x.coeffs();
  std::vector<Atom> atoms;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double mass = std::norm(coeffs[j]);
    if (!atoms.empty() && points[j] - atoms.back().point <= kAtomMergeTolerance) {
      atoms.back().mass += mass;
    } else {
      atoms.push_back({points[j], mass});
    }
  }
  return atoms;
}

/// True iff some spectral point lies in (s, t].
inline bool band_nonempty(const SpectralOperator& op, double s, double t) {
  if (!(s < t)) fail(ErrorKind::InvalidArgument, "band requires s < t");
  const auto points = op.points();
  const auto it = std::upper_bound(points.begin(), points.end(), s);
  return it != points.end() && *it <= t;
}

/// Element supported on (s, t] with the given norm. All mass sits on the
/// largest in-band point; equal maximal points share it uniformly.
inline SpectralElement band_element(const SpectralOperator& op, double s, double t, double target_norm) {
  if (!(s < t)) fail(ErrorKind::InvalidArgument, "band requires s < t");
  if (!(target_norm > 0.0) || !std::isfinite(target_norm)) {
    fail(ErrorKind::InvalidArgument, "target norm must be positive");
  }
  const auto points = op.points();
  // last index with point <= t
  auto last = std::upper_bound(points.begin(), points.end(), t);
  if (last == points.begin() || *(last - 1) <= s) {
    fail(ErrorKind::EmptyBand, "no spectral point in (" + std::to_string(s) + ", " + std::to_string(t) + "]");
  }
  const double top = *(last - 1);
  auto first = std::lower_bound(points.begin(), last, top);
  const auto count = static_cast<double>(last - first);
  const double c = target_norm / std::sqrt(count);

  CoeffVector coeffs(points.size());
  for (auto it = first; it != last; ++it) coeffs[static_cast<std::size_t>(it - points.begin())] = c;
  return {op, std::move(coeffs)};
}

}  // namespace opineq
