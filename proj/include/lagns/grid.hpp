#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace lagns {

/// Truncated Lagrangian mass coordinate grid on [0, X_max]. Velocity and
/// radius live on edges, specific volume and temperature on cell centers.
class MassGrid {
 public:
  explicit MassGrid(std::vector<double> edges);

  [[nodiscard]] std::size_t cells() const { return widths_.size(); }
  [[nodiscard]] std::size_t edges() const { return edges_.size(); }
  [[nodiscard]] double x_max() const { return edges_.back(); }

  [[nodiscard]] std::span<const double> x_edges() const { return edges_; }
  [[nodiscard]] std::span<const double> cell_centers() const { return centers_; }
  [[nodiscard]] std::span<const double> cell_widths() const { return widths_; }

  [[nodiscard]] double edge(std::size_t i) const { return edges_[i]; }
  [[nodiscard]] double center(std::size_t j) const { return centers_[j]; }
  [[nodiscard]] double width(std::size_t j) const { return widths_[j]; }

  /// Distance between the centers adjacent to interior edge i (1 <= i < cells()).
  [[nodiscard]] double dual_width(std::size_t i) const {
    return centers_[i] - centers_[i - 1];
  }

  /// Index of the cell containing x (clamped to the grid).
  [[nodiscard]] std::size_t locate(double x) const;

  bool operator==(const MassGrid&) const = default;

 private:
  std::vector<double> edges_;
  std::vector<double> centers_;
  std::vector<double> widths_;
};

struct Grading {
  /// Ratio of consecutive cell widths; 1 is uniform.
  double ratio = 1.0;

  static Grading uniform() { return {}; }
  static Grading geometric(double r) { return {r}; }
};

/// Builds N cells over [0, X_max]. Requires X_max > 0, N >= 2 and a ratio in
/// [1, 1.2]; throws std::invalid_argument otherwise.
MassGrid build_mass_grid(double x_max, std::size_t n_cells, Grading grading = Grading::uniform());

/// r at every edge from r^n = 1 + n * integral_0^x v, midpoint rule per cell.
/// Throws std::domain_error if any v <= 0.
std::vector<double> radius_from_volume(const MassGrid& grid, std::span<const double> v, int n);

/// Initial density profile over the physical radius r >= 1.
struct DensityProfile {
  std::function<double(double)> rho;
  /// Positive lower bound of rho on [1, inf), when known. Tightens the root bracket.
  std::optional<double> rho_min;
};

/// Solves integral_1^{r0} y^{n-1} rho0(y) dy = x for r0 >= 1. Bisection
/// followed by Newton polishing; the integral residual is driven below
/// `tol`. Throws std::domain_error when rho0 is not positive or the root
/// cannot be bracketed.
double lagrangian_radius_of_mass(const DensityProfile& rho0, double x, int n, double tol = 1e-12);

}  // namespace lagns
