#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lagns/diagnostics.hpp"
#include "lagns/grid.hpp"
#include "lagns/params.hpp"
#include "lagns/state.hpp"

namespace lagns {

/// Source terms (S_v, S_u, S_theta) added to the right-hand sides of the
/// mass, momentum and energy equations. S_v and S_theta are sampled at cell
/// centers, S_u at edges.
using Forcing = std::function<std::array<double, 3>(double x, double t)>;

struct RunConfig {
  double x_max = 20.0;
  std::size_t n_cells = 400;
  Grading grading{};
  InitProfile profile{};

  double t_end = 1.0;
  /// Upper bound on the CFL step.
  double dt_initial = 0.01;
  double cfl_fraction = 0.5;
  /// When positive every step uses this dt (the last one is shortened to
  /// land on t_end); the CFL selection is bypassed.
  double dt_fixed = 0.0;
  double v_floor = 1e-6;
  double theta_floor = 1e-6;
  int max_retries = 12;
  int scheme_order = 1;

  /// Steps between diagnostics samples; t = 0 and t_end are always sampled.
  std::size_t cadence = 1;
  /// Steps between stored snapshots, 0 keeps only the first and the last.
  std::size_t snapshot_cadence = 0;

  DiagnosticsOptions diagnostics{};

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

struct StepReport {
  double dt = 0.0;
  int rejections = 0;
  double momentum_residual = 0.0;
  double energy_residual = 0.0;
  bool floor_violated = false;
};

struct StepResult {
  std::optional<FlowState> state;  // empty when the floors were violated
  StepReport report;
};

/// Thrown when dt halving cannot keep v and theta above their floors.
class PositivityFailure : public std::runtime_error {
 public:
  PositivityFailure(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
  [[nodiscard]] double time() const { return t_; }

 private:
  double t_;
};

struct StepOptions {
  int scheme_order = 1;
  double v_floor = 1e-6;
  double theta_floor = 1e-6;
  const Forcing* forcing = nullptr;
};

/// u = 0 at x = 0 and at X_max, (v, theta) = (1, 1) in the last cell. The
/// theta ghost mirror at x = 0 is built into every operator, so it needs no
/// stored value.
FlowState apply_boundary(const FlowState& state);

/// Acoustic step limit cfl * min_j dx_j v_j / (r_{j+1}^{n-1} sqrt(gamma R theta_j)),
/// capped by dt_initial.
double select_dt(const FlowState& state, const PhysParams& params, const RunConfig& config);

/// One IMEX step: implicit viscous momentum solve, mass update with the new
/// velocity, radius reconstruction, implicit conduction with explicit work
/// and dissipation sources. Order 2 uses a half-step predictor for the
/// frozen coefficients and Crank-Nicolson weighting of the implicit terms.
StepResult step(const FlowState& state, const PhysParams& params, double dt,
                const StepOptions& options = {});

/// step() with dt halving on floor violations; throws PositivityFailure
/// once max_retries halvings have failed.
std::pair<FlowState, StepReport> advance(const FlowState& state, const PhysParams& params, double dt,
                                         const StepOptions& options, int max_retries);

struct RunResult {
  DiagnosticsSeries series;
  std::vector<FlowState> snapshots;
  RunSummary summary;
  std::optional<RepresentationResult> representation;
};

/// Optional per-step hook, called with the (old, new) pair of every accepted step.
using StepObserver = std::function<void(const FlowState&, const FlowState&, const StepReport&)>;

RunResult run(const RunConfig& config, const PhysParams& params, const Forcing* forcing = nullptr,
              const StepObserver& observer = {});

/// Same as run() but starts from a given state instead of config.profile.
RunResult run_from(FlowState initial, const RunConfig& config, const PhysParams& params,
                   const Forcing* forcing = nullptr, const StepObserver& observer = {});

}  // namespace lagns
