#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lagns/representation.hpp"
#include "lagns/solver.hpp"

using namespace lagns;
using testing::uniform_grid;

namespace {

RunConfig bump_run(std::size_t cells, double dt) {
  RunConfig c;
  c.x_max = 20.0;
  c.n_cells = cells;
  c.t_end = 1.0;
  c.dt_fixed = dt;
  c.cadence = 1;
  c.snapshot_cadence = 1;
  c.profile.kind = ProfileKind::gaussian_bump;
  c.profile.amplitudes = {0.1, 0.1, 0.1};
  c.profile.center = 3.0;
  c.diagnostics.probe_enabled = true;
  c.diagnostics.probe_k = 4;
  c.diagnostics.probe_x = 3.0;
  return c;
}

}  // namespace

TEST_CASE("cutoff function") {
  CHECK(cutoff_phi(3.5, 4) == 1.0);
  CHECK(cutoff_phi(4.0, 4) == 1.0);
  CHECK(cutoff_phi(4.5, 4) == 0.5);
  CHECK(cutoff_phi(4.25, 4) == 0.75);
  CHECK(cutoff_phi(5.0, 4) == 0.0);
  CHECK(cutoff_phi(6.0, 4) == 0.0);
  CHECK(cutoff_phi(-1.0, 1) == 1.0);
}

TEST_CASE("representation at the initial time is the initial volume") {
  const PhysParams p;
  const auto grid = uniform_grid(10.0, 200);
  const auto s = testing::state_from(grid, 2, [](double x) { return 1.0 + 0.3 * std::exp(-(x - 2.5) * (x - 2.5)); },
                                     [](double x) { return 0.05 * std::sin(x); }, [](double) { return 1.2; });
  const std::vector<FlowState> h{s};
  const auto r = local_representation(h, p, 4, 2.5);
  REQUIRE(r.v_repr.size() == 1);
  CHECK(r.Y[0] == 1.0);
  CHECK(r.v_repr[0] == doctest::Approx(r.v_solved[0]).epsilon(1e-15));
  CHECK(r.v_solved[0] == doctest::Approx(1.3).epsilon(1e-4));
  CHECK(r.residual <= 1e-15);
}

TEST_CASE("equilibrium representation is exact") {
  PhysParams p;
  p.n = 3;
  p.lambda = 0.5;
  const auto grid = uniform_grid(10.0, 100);
  std::vector<FlowState> h;
  for (int s = 0; s <= 100; ++s) h.push_back(testing::equilibrium_state(grid, 3).with_time(0.1 * s));
  const auto r = local_representation(h, p, 4, 3.0);
  CHECK(r.residual <= 1e-10);
  for (std::size_t s = 0; s < r.t.size(); ++s) {
    CHECK(r.B[s] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.Y[s] == doctest::Approx(std::exp(-p.R * r.t[s] / p.beta())).epsilon(1e-12));
  }
}

TEST_CASE("representation residual shrinks under refinement") {
  const PhysParams p;
  const auto coarse = run(bump_run(200, 0.02), p);
  const auto fine = run(bump_run(400, 0.01), p);
  REQUIRE(coarse.representation.has_value());
  REQUIRE(fine.representation.has_value());
  const double rc = coarse.representation->residual;
  const double rf = fine.representation->residual;
  CAPTURE(rc);
  CAPTURE(rf);
  CHECK(rc > 0.0);
  CHECK(rf < 0.7 * rc);
  CHECK(fine.summary.repr_residual == doctest::Approx(rf));
  // the probe moves, so Y must have decayed below its initial value
  CHECK(fine.representation->Y.back() < 1.0);
}

TEST_CASE("offline representation reproduces the online probe") {
  const PhysParams p;
  const auto r = run(bump_run(200, 0.02), p);
  REQUIRE(r.representation.has_value());
  REQUIRE(r.snapshots.size() == r.representation->t.size());
  const auto off = local_representation(r.snapshots, p, 4, 3.0);
  CHECK(off.residual == doctest::Approx(r.representation->residual).epsilon(1e-13));
  for (std::size_t s = 0; s < off.t.size(); ++s) {
    CHECK(off.t[s] == r.representation->t[s]);
    CHECK(off.v_repr[s] == doctest::Approx(r.representation->v_repr[s]).epsilon(1e-13));
  }
  CHECK(r.series.back().repr_residual <= r.representation->residual);
}

TEST_CASE("representation arguments are validated") {
  const PhysParams p;
  const auto grid = uniform_grid(6.0, 60);
  const std::vector<FlowState> h{testing::equilibrium_state(grid, 2)};
  CHECK_THROWS_AS(local_representation(std::span<const FlowState>{}, p, 4, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(local_representation(h, p, 0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(local_representation(h, p, 6, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(local_representation(h, p, 4, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(local_representation(h, p, 4, 1.5), std::invalid_argument);
  CHECK_NOTHROW(local_representation(h, p, 5, 3.5));
}
