#pragma once

#include <span>
#include <vector>

namespace lagns {

/// Tridiagonal system  lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// lower[0] and upper[size-1] are ignored.
struct Tridiagonal {
  std::vector<double> lower, diag, upper;

  explicit Tridiagonal(std::size_t size) : lower(size, 0.0), diag(size, 0.0), upper(size, 0.0) {}
  [[nodiscard]] std::size_t size() const { return diag.size(); }

  /// Thomas elimination without pivoting; the solver only builds diagonally
  /// dominant systems. Throws std::runtime_error on a zero pivot.
  [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const;

  /// max_i |(A x - rhs)_i|
  [[nodiscard]] double residual(std::span<const double> x, std::span<const double> rhs) const;
};

}  // namespace lagns
