#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lagns/grid.hpp"
#include "lagns/params.hpp"

namespace lagns {

/// Snapshot of the discrete flow at one instant. v and theta are cell
/// averages, u and r are edge values. The radius is always recomputed from
/// v, so it can never drift from the volume field.
class FlowState {
 public:
  /// Throws std::domain_error if any v or theta is not positive.
  FlowState(std::shared_ptr<const MassGrid> grid, int n, double t, std::vector<double> v,
            std::vector<double> u, std::vector<double> theta);

  [[nodiscard]] const MassGrid& grid() const { return *grid_; }
  [[nodiscard]] const std::shared_ptr<const MassGrid>& grid_ptr() const { return grid_; }
  [[nodiscard]] int dimension() const { return n_; }
  [[nodiscard]] double t() const { return t_; }
  [[nodiscard]] std::span<const double> v() const { return v_; }
  [[nodiscard]] std::span<const double> u() const { return u_; }
  [[nodiscard]] std::span<const double> theta() const { return theta_; }
  [[nodiscard]] std::span<const double> r() const { return r_; }

  /// Radius at cell centers, from the mean of r^n over the two bounding edges.
  [[nodiscard]] double r_center(std::size_t j) const;

  /// u = 0 at both ends and (v, theta) = (1, 1) in the last cell.
  [[nodiscard]] bool satisfies_boundary() const;

  [[nodiscard]] FlowState with_time(double t) const;

 private:
  std::shared_ptr<const MassGrid> grid_;
  int n_;
  double t_;
  std::vector<double> v_, u_, theta_, r_;
};

enum class ProfileKind { equilibrium, gaussian_bump, custom_table };

/// Initial perturbation of the equilibrium (1, 0, 1).
///
/// A Gaussian bump G(x) = exp(-((x - c)/w)^2) is reflected about x = 0 so the
/// boundary conditions hold exactly: v and theta use the even extension
/// 1 + a (G(x - c) + G(x + c)), u the odd one a (G(x - c) - G(x + c)).
/// A custom table is linearly interpolated; past its last row the
/// equilibrium is used.
struct InitProfile {
  ProfileKind kind = ProfileKind::equilibrium;
  /// Amplitudes for (v - 1, u, theta - 1).
  std::array<double, 3> amplitudes{0.0, 0.0, 0.0};
  double center = 5.0;
  double width = 1.0;

  struct Table {
    std::vector<double> x, v, u, theta;
  } table;

  [[nodiscard]] std::array<double, 3> evaluate(double x) const;
};

/// Reads a custom profile table: CSV with header x,v,u,theta.
InitProfile::Table read_profile_table(const std::string& path);

/// Samples the profile at cell centers (v, theta) and edges (u), then pins
/// the boundary values. Throws std::invalid_argument when the profile is
/// not bounded away from zero or has not relaxed to equilibrium at X_max.
FlowState make_initial_data(std::shared_ptr<const MassGrid> grid, const InitProfile& profile,
                            const PhysParams& params);

/// sigma = beta (r^{n-1} u)_x / v - R theta / v at cell centers.
std::vector<double> stress_sigma(const FlowState& state, const PhysParams& params);

/// Discrete derivatives on the staggered grid.
///
/// Edge-located arrays have grids.edges() entries, center-located ones
/// grid.cells(). Edge derivatives of center fields are centered differences
/// across the edge; at x = 0 theta_x uses the mirrored ghost cell (so it is
/// zero) and v_x is one-sided, likewise v_x and theta_x at X_max.
struct Gradients {
  std::vector<double> v_x;       // edges
  std::vector<double> theta_x;   // edges
  std::vector<double> u_x;       // centers
  std::vector<double> flux_x;    // centers, (r^{n-1} u)_x
  std::vector<double> r_pow_u_x; // centers, r^{n-1} u_x
  std::vector<double> geom_vu;   // centers, (n-1) v u / r
  std::vector<double> kinetic_x; // centers, (r^{n-2} u^2)_x
  std::vector<double> kinetic_split; // centers, 2 u (r^{n-1}u)_x / r - n u^2 v / r^2
};

Gradients discrete_gradients(const FlowState& state);

}  // namespace lagns
