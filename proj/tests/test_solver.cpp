#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "lagns/diagnostics.hpp"
#include "lagns/oracle.hpp"
#include "lagns/solver.hpp"

using namespace lagns;
using testing::uniform_grid;

namespace {

RunConfig bump_config(double x_max, std::size_t cells, double t_end, double amp = 0.1) {
  RunConfig c;
  c.x_max = x_max;
  c.n_cells = cells;
  c.t_end = t_end;
  c.profile.kind = ProfileKind::gaussian_bump;
  c.profile.amplitudes = {amp, amp, amp};
  return c;
}

double max_field_diff(const FlowState& a, const FlowState& b) {
  return std::max({testing::max_abs_diff(a.v(), b.v()), testing::max_abs_diff(a.u(), b.u()),
                   testing::max_abs_diff(a.theta(), b.theta())});
}

}  // namespace

TEST_CASE("apply_boundary") {
  const auto grid = uniform_grid(2.0, 8);
  const auto eq = testing::equilibrium_state(grid, 2);
  const auto same = apply_boundary(eq);
  CHECK(max_field_diff(eq, same) == 0.0);

  std::vector<double> u(9, 0.1);
  u[0] = 0.3;
  const FlowState s(grid, 2, 0.5, std::vector<double>(8, 1.1), u, std::vector<double>(8, 1.2));
  const auto b = apply_boundary(s);
  CHECK(b.u()[0] == 0.0);
  for (std::size_t i = 1; i + 1 < 9; ++i) CHECK(b.u()[i] == 0.1);
  CHECK(b.satisfies_boundary());
  CHECK(b.t() == 0.5);
}

TEST_CASE("select_dt follows the acoustic formula") {
  PhysParams p;
  RunConfig c;
  c.dt_initial = 1e9;
  c.cfl_fraction = 0.4;
  for (int n : {2, 3}) {
    p.n = n;
    const auto grid = uniform_grid(20.0, 400);
    const auto eq = testing::equilibrium_state(grid, n);
    // the limiting cell is the outermost one, where r^{n-1} is largest
    const double r_out = std::pow(1.0 + n * 20.0, 1.0 / n);
    const double expected = 0.4 * 0.05 / (std::pow(r_out, n - 1) * std::sqrt(p.R * (1.0 + p.R / p.cv)));
    CHECK(select_dt(eq, p, c) == doctest::Approx(expected).epsilon(1e-13));

    const auto hot = testing::state_from(grid, n, [](double) { return 1.0; }, [](double) { return 0.0; },
                                         [](double) { return 4.0; });
    CHECK(select_dt(hot, p, c) == doctest::Approx(0.5 * expected).epsilon(1e-13));
  }
  c.dt_initial = 1e-4;
  CHECK(select_dt(testing::equilibrium_state(uniform_grid(20.0, 400), 2), p, c) == 1e-4);
}

TEST_CASE("equilibrium is a fixed point of both schemes") {
  const PhysParams p;
  const auto eq = testing::equilibrium_state(uniform_grid(20.0, 200), 2);
  for (int order : {1, 2}) {
    StepOptions opt;
    opt.scheme_order = order;
    const auto r = step(eq, p, 0.05, opt);
    REQUIRE(r.state);
    CHECK(max_field_diff(eq, *r.state) < 1e-14);
    CHECK(r.state->t() == doctest::Approx(0.05));
    CHECK_FALSE(r.report.floor_violated);
  }
}

TEST_CASE("volume grows exactly where the flux divergence is positive") {
  const PhysParams p;
  const auto grid = uniform_grid(10.0, 100);
  const auto s = testing::state_from(
      grid, 2, [](double) { return 1.0; },
      [](double x) { return x > 0.0 && x < 10.0 ? 0.05 * std::exp(-(x - 4.0) * (x - 4.0)) : 0.0; },
      [](double) { return 1.0; });
  const auto r = step(s, p, 0.01);
  REQUIRE(r.state);
  const auto& ns = *r.state;
  const int n = 2;
  std::size_t checked = 0;
  for (std::size_t j = 0; j + 1 < grid->cells(); ++j) {
    // flux built from the new velocity on the old geometry
    const double flux = (std::pow(s.r()[j + 1], n - 1) * ns.u()[j + 1] - std::pow(s.r()[j], n - 1) * ns.u()[j]) /
                        grid->width(j);
    if (std::abs(flux) < 1e-12) continue;
    CHECK((ns.v()[j] - 1.0 > 0.0) == (flux > 0.0));
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("momentum update is consistent with the stress gradient") {
  // for a tiny step u_t = r^{n-1} (sigma_i - sigma_{i-1}) / h
  const PhysParams p;
  RunConfig c = bump_config(20.0, 400, 1.0, 0.1);
  const auto grid = uniform_grid(20.0, 400);
  const auto s = make_initial_data(grid, c.profile, p);
  const double dt = 1e-7;
  const auto r = step(s, p, dt);
  REQUIRE(r.state);
  const auto sigma = stress_sigma(s, p);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 1; i + 1 < grid->edges(); ++i) {
    const double rate = (r.state->u()[i] - s.u()[i]) / dt;
    const double expected = s.r()[i] * (sigma[i] - sigma[i - 1]) / grid->dual_width(i);
    worst = std::max(worst, std::abs(rate - expected));
    scale = std::max(scale, std::abs(expected));
  }
  CHECK(worst < 1e-3 * scale);
}

TEST_CASE("floor violations reject the step and halving is capped") {
  const PhysParams p;
  const auto grid = uniform_grid(10.0, 50);
  const auto s = testing::state_from(grid, 2, [](double x) { return x < 9.0 ? 0.9995 : 1.0; },
                                     [](double) { return 0.0; }, [](double) { return 1.0; });
  StepOptions opt;
  opt.v_floor = 0.9999;
  const auto r = step(s, p, 0.01, opt);
  CHECK(r.report.floor_violated);
  CHECK_FALSE(r.state);
  CHECK_THROWS_AS(advance(s, p, 0.01, opt, 3), PositivityFailure);
  try {
    advance(s, p, 0.01, opt, 3);
  } catch (const PositivityFailure& e) {
    CHECK(e.time() == 0.0);
  }
}

TEST_CASE("equilibrium run keeps every diagnostic at its equilibrium value") {
  const PhysParams p;
  RunConfig c;
  c.x_max = 20.0;
  c.n_cells = 100;
  c.t_end = 10.0;
  const auto res = run(c, p);
  CHECK(res.summary.t_end == doctest::Approx(10.0));
  for (const auto& s : res.series) {
    CHECK(s.energy <= 1e-24);
    CHECK(s.sup_all() <= 1e-14);
    for (double d : s.dissipation) CHECK(d <= 1e-24);
    CHECK(s.v_min == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.theta_max == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(res.summary.max_step_change <= 1e-14);
  CHECK(res.summary.all_passed());
}

TEST_CASE("small bump decays and run hits t_end exactly") {
  const PhysParams p;
  auto c = bump_config(20.0, 200, 3.0);
  c.dt_initial = 0.07;  // does not divide t_end
  const auto res = run(c, p);
  CHECK(res.series.back().t == 3.0);
  CHECK(res.series.back().sup_all() < res.series.front().sup_all());
  CHECK(res.summary.all_passed());
  CHECK(res.snapshots.size() == 2);
  CHECK(res.snapshots.back().t() == 3.0);
  for (const auto& s : res.snapshots) CHECK(s.satisfies_boundary());
}

TEST_CASE("cadence and snapshot cadence") {
  const PhysParams p;
  auto c = bump_config(20.0, 100, 1.0);
  c.dt_fixed = 0.01;
  c.cadence = 10;
  c.snapshot_cadence = 25;
  const auto res = run(c, p);
  CHECK(res.summary.steps == 100);
  CHECK(res.series.size() == 11);
  CHECK(res.snapshots.size() == 5);
}

TEST_CASE("runs are deterministic and a zero forcing changes nothing") {
  const PhysParams p;
  const auto c = bump_config(20.0, 100, 1.0);
  const auto a = run(c, p);
  const auto b = run(c, p);
  const Forcing zero = [](double, double) { return std::array<double, 3>{0.0, 0.0, 0.0}; };
  const auto z = run(c, p, &zero);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  CHECK(max_field_diff(a.snapshots.back(), b.snapshots.back()) == 0.0);
  CHECK(max_field_diff(a.snapshots.back(), z.snapshots.back()) == 0.0);
  CHECK(a.series.back().energy == z.series.back().energy);
}

TEST_CASE("observer sees every accepted step") {
  const PhysParams p;
  auto c = bump_config(20.0, 100, 0.5);
  c.dt_fixed = 0.05;
  std::size_t calls = 0;
  double last_t = 0.0;
  run(c, p, nullptr, [&](const FlowState& old_state, const FlowState& new_state, const StepReport& rep) {
    ++calls;
    CHECK(new_state.t() == doctest::Approx(old_state.t() + rep.dt));
    CHECK(rep.momentum_residual < 1e-10);
    last_t = new_state.t();
  });
  CHECK(calls == 10);
  CHECK(last_t == doctest::Approx(0.5));
}

TEST_CASE("second-order scheme self-converges at second order in time") {
  const PhysParams p;
  const auto mc = manufactured_fixture("tanh_bump");
  const Forcing f = make_forcing(mc, p);
  const auto grid = uniform_grid(10.0, 100);
  auto solve = [&](int order, double dt) {
    FlowState s = sample_manufactured(mc, grid, p, 0.0);
    StepOptions opt;
    opt.scheme_order = order;
    opt.forcing = &f;
    const int steps = static_cast<int>(std::lround(0.5 / dt));
    for (int k = 0; k < steps; ++k) s = advance(s, p, dt, opt, 2).first;
    return s;
  };
  for (int order : {1, 2}) {
    const auto ref = solve(order, 0.5 / 1024);
    const double e1 = max_field_diff(solve(order, 0.5 / 32), ref);
    const double e2 = max_field_diff(solve(order, 0.5 / 64), ref);
    const double e3 = max_field_diff(solve(order, 0.5 / 128), ref);
    const double rate = std::log2(e2 / e3);
    MESSAGE("scheme order " << order << " self-convergence rates " << std::log2(e1 / e2) << ", " << rate);
    if (order == 1) {
      CHECK(rate > 0.9);
      CHECK(rate < 1.3);
    } else {
      CHECK(rate > 1.7);
    }
  }
}

TEST_CASE("run config validation") {
  RunConfig c;
  c.n_cells = 3;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.cfl_fraction = 1.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.scheme_order = 3;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.t_end = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_NOTHROW(RunConfig{}.validate());
}
