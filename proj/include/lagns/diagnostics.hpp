#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lagns/params.hpp"
#include "lagns/representation.hpp"
#include "lagns/state.hpp"

namespace lagns {

/// Integral of U = R(v - ln v - 1) + u^2/2 + cv(theta - ln theta - 1) over
/// the grid, midpoint rule with u^2 averaged onto centers.
double energy_functional(const FlowState& state, const PhysParams& params);

/// The four dissipation integrals
///   v u^2/(r^2 theta), r^{2(n-1)} u_x^2/(v theta), (r^{n-1}u)_x^2/(v theta),
///   r^{2(n-1)} theta_x^2/(v theta^2).
std::array<double, 4> dissipation_rate(const FlowState& state, const PhysParams& params);

/// Integral of the energy-identity dissipation
///   beta (r^{n-1}u)_x^2/(v theta) - 2 mu (n-1)(r^{n-2}u^2)_x/theta + kappa r^{2(n-1)} theta_x^2/(v theta^2).
double balance_dissipation(const FlowState& state, const PhysParams& params);

/// E(t_end) + int_0^{t_end} balance_dissipation dt - E(0), trapezoid over
/// the samples. Throws std::invalid_argument with fewer than 2 states.
double energy_balance_defect(std::span<const FlowState> history, const PhysParams& params);
inline double energy_balance_residual(std::span<const FlowState> history, const PhysParams& params) {
  const double d = energy_balance_defect(history, params);
  return d < 0.0 ? -d : d;
}

/// Q(a, b) = beta (a + (n-1) b)^2 - 2 mu (n-1) [2 b (a + (n-1) b) - n b^2]
/// with a = r^{n-1} u_x and b = v u / r.
double viscous_quadratic_form(const PhysParams& params, double a, double b);

/// Smallest eigenvalue of Q. Throws std::invalid_argument for inadmissible params.
double viscous_form_gap(const PhysParams& params);

/// min over cell centers of Q(a,b) - C_min (a^2 + b^2), scaled by
/// max(1, a^2 + b^2); non-negative up to rounding when the bound holds.
double viscous_form_margin(const FlowState& state, const PhysParams& params);

/// Averages of v and theta over the unit mass interval [k, k+1].
/// Throws std::out_of_range if the interval leaves the grid.
std::pair<double, double> cell_averages(const FlowState& state, int k);

/// The roots alpha1 <= 1 <= alpha2 of y - ln y - 1 = cbar by bisection.
/// Throws std::invalid_argument for negative cbar.
std::pair<double, double> anchor_roots(double cbar);

/// Total width of cells with theta > a. Throws std::invalid_argument for a <= 1.
double superlevel_measure(const FlowState& state, double a);

/// energy / (cv (a - ln a - 1)), the bound on the superlevel measure.
double superlevel_bound(double energy, const PhysParams& params, double a);

struct DiagnosticsOptions {
  double superlevel_a = 1.5;
  bool probe_enabled = false;
  int probe_k = 4;
  double probe_x = 3.0;
  /// Tolerance used by the sampled invariant checks.
  double check_tol = 1e-8;
};

/// One row of the diagnostics series.
struct DiagnosticSample {
  double t = 0.0;
  double energy = 0.0;
  std::array<double, 4> dissipation{};
  double balance_rate = 0.0;
  double balance_defect = 0.0;  // running E(t) + int D - E(0)
  std::array<double, 3> l2{};       // (v-1, u, theta-1)
  std::array<double, 3> l2_grad{};  // r^{n-1} (v_x, u_x, theta_x)
  std::array<double, 3> sup{};      // (v-1, u, theta-1)
  double v_min = 1.0, v_max = 1.0, theta_min = 1.0, theta_max = 1.0;
  double f = 0.0;
  double g = 0.0;
  double omega_measure = 0.0;
  double theta_u4 = 0.0;  // int (theta-1)^2 + u^4
  std::array<double, 3> grad_sq{};  // ||v_x||^2, ||u_x||^2, ||theta_x||^2
  // instantaneous accumulator integrands
  double rate_v_x = 0.0;      // int (1+theta) v_x^2
  double rate_u_xx = 0.0;     // int r^{2(n-1)} u_xx^2
  double rate_theta_xx = 0.0; // int r^{2(n-1)} theta_xx^2
  double rate_u_t = 0.0;      // int u_t^2, backward quotient
  double rate_theta_t = 0.0;  // int theta_t^2, backward quotient
  // running time integrals
  std::array<double, 5> accumulators{};
  std::array<double, 3> total_variation{};  // of grad_sq
  double repr_v = 0.0;
  double repr_residual = 0.0;
  double r_shadow_gap = 0.0;

  [[nodiscard]] double sup_all() const;
};

/// Fills every instantaneous field of a sample. `prev` supplies the
/// backward difference quotients for u_t and theta_t.
DiagnosticSample norm_report(const FlowState& state, const FlowState* prev, const PhysParams& params,
                             const DiagnosticsOptions& options = {});

using DiagnosticsSeries = std::vector<DiagnosticSample>;

/// Column names of the diagnostics CSV in file order.
const std::vector<std::string>& diagnostics_columns();
std::vector<double> diagnostics_row(const DiagnosticSample& s);
DiagnosticSample diagnostics_from_row(std::span<const double> row);

struct InvariantFlag {
  std::string name;
  bool passed = true;
  double worst = 0.0;  // worst observed margin, sign convention per check
};

struct RunSummary {
  double t_end = 0.0;
  std::size_t steps = 0;
  std::size_t samples = 0;
  int rejections = 0;
  double v_min = 1.0, v_max = 1.0, theta_min = 1.0, theta_max = 1.0;
  double r_min = 1.0;
  double max_step_change = 0.0;
  double max_r_shadow_gap = 0.0;
  double energy_initial = 0.0, energy_final = 0.0, energy_max = 0.0;
  double sup_initial = 0.0, sup_final = 0.0;
  double balance_residual = 0.0;
  double repr_residual = 0.0;
  std::vector<InvariantFlag> invariants;

  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] const InvariantFlag* find(const std::string& name) const;
};

/// Builds the series sample by sample: running accumulators, energy
/// balance, the representation probe and the sampled invariant checks.
class DiagnosticsRecorder {
 public:
  DiagnosticsRecorder(const PhysParams& params, DiagnosticsOptions options);

  void sample(const FlowState& state, double r_shadow_gap = 0.0);

  [[nodiscard]] const DiagnosticsSeries& series() const { return series_; }
  [[nodiscard]] const std::optional<RepresentationProbe>& probe() const { return probe_; }
  [[nodiscard]] const std::vector<InvariantFlag>& invariants() const { return flags_; }

 private:
  InvariantFlag& flag(const std::string& name);
  void check(const std::string& name, double margin, double tol);

  PhysParams params_;
  DiagnosticsOptions options_;
  DiagnosticsSeries series_;
  std::optional<FlowState> prev_;
  std::optional<RepresentationProbe> probe_;
  std::vector<InvariantFlag> flags_;
  double anchor_lo_ = 1.0, anchor_hi_ = 1.0;
};

}  // namespace lagns
