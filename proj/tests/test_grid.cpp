#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "lagns/grid.hpp"

using namespace lagns;

TEST_CASE("uniform grid edges and widths") {
  const auto g = build_mass_grid(1.0, 4);
  const std::vector<double> expected{0.0, 0.25, 0.5, 0.75, 1.0};
  REQUIRE(g.edges() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(g.edge(i) == doctest::Approx(expected[i]).epsilon(1e-15));

  const auto g2 = build_mass_grid(2.0, 2);
  CHECK(g2.width(0) == doctest::Approx(1.0));
  CHECK(g2.width(1) == doctest::Approx(1.0));
  CHECK(g2.center(1) == doctest::Approx(1.5));
  CHECK(g2.dual_width(1) == doctest::Approx(1.0));
}

TEST_CASE("geometric grading") {
  const auto g = build_mass_grid(1.0, 4, Grading::geometric(1.1));
  // hand oracle: h0 (1 + 1.1 + 1.21 + 1.331) = 1
  const double h0 = 1.0 / 4.641;
  double sum = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(g.width(j) == doctest::Approx(h0 * std::pow(1.1, j)).epsilon(1e-13));
    sum += g.width(j);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.x_max() == 1.0);
  for (std::size_t j = 1; j < 4; ++j) CHECK(g.width(j) / g.width(j - 1) == doctest::Approx(1.1));
}

TEST_CASE("grid rejects bad input") {
  CHECK_THROWS_AS(build_mass_grid(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_mass_grid(-1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_mass_grid(1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_mass_grid(1.0, 4, Grading::geometric(0.9)), std::invalid_argument);
  CHECK_THROWS_AS(build_mass_grid(1.0, 4, Grading::geometric(1.5)), std::invalid_argument);
  CHECK_THROWS_AS(MassGrid({0.0, 0.5, 0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(MassGrid({0.1, 0.5, 1.0}), std::invalid_argument);
}

TEST_CASE("locate finds the containing cell") {
  const auto g = build_mass_grid(10.0, 7, Grading::geometric(1.1));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double x = dist(rng);
    const auto j = g.locate(x);
    CHECK(g.edge(j) <= x);
    CHECK(x <= g.edge(j + 1));
  }
  CHECK(g.locate(10.0) == 6);
}

TEST_CASE("radius from volume examples") {
  const auto g3 = build_mass_grid(7.0, 7);
  const std::vector<double> ones(7, 1.0);
  const auto r3 = radius_from_volume(g3, ones, 3);
  CHECK(r3.front() == 1.0);
  CHECK(r3.back() == doctest::Approx(std::cbrt(22.0)).epsilon(1e-14));

  const auto g2 = build_mass_grid(1.0, 4);
  const std::vector<double> twos(4, 2.0);
  const auto r2 = radius_from_volume(g2, twos, 2);
  CHECK(r2.front() == 1.0);
  CHECK(r2.back() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("radius is increasing and starts at one for positive volume") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.2, 3.0);
  const auto g = build_mass_grid(5.0, 50, Grading::geometric(1.02));
  for (int n : {2, 3}) {
    std::vector<double> v(50);
    for (auto& x : v) x = dist(rng);
    const auto r = radius_from_volume(g, v, n);
    CHECK(r.front() == 1.0);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] > r[i - 1]);
    // r^n - 1 = n * sum v dx exactly
    double acc = 0.0;
    for (std::size_t j = 0; j < 50; ++j) acc += v[j] * g.width(j);
    CHECK(std::pow(r.back(), n) == doctest::Approx(1.0 + n * acc).epsilon(1e-13));
  }
}

TEST_CASE("radius rejects non-positive volume") {
  const auto g = build_mass_grid(1.0, 4);
  CHECK_THROWS_AS(radius_from_volume(g, std::vector<double>{1.0, 0.0, 1.0, 1.0}, 2), std::domain_error);
  CHECK_THROWS_AS(radius_from_volume(g, std::vector<double>{1.0, -1.0, 1.0, 1.0}, 2), std::domain_error);
  CHECK_THROWS_AS(radius_from_volume(g, std::vector<double>{1.0, 1.0, 1.0}, 2), std::invalid_argument);
}

TEST_CASE("lagrangian radius of mass") {
  const DensityProfile unit{[](double) { return 1.0; }, 1.0};
  CHECK(lagrangian_radius_of_mass(unit, 0.0, 2) == 1.0);
  for (double x : {0.1, 1.0, 3.7, 25.0}) {
    CHECK(lagrangian_radius_of_mass(unit, x, 2) == doctest::Approx(std::sqrt(1.0 + 2.0 * x)).epsilon(1e-12));
    CHECK(lagrangian_radius_of_mass(unit, x, 3) == doctest::Approx(std::cbrt(1.0 + 3.0 * x)).epsilon(1e-12));
  }
  const DensityProfile inverse{[](double y) { return 1.0 / y; }, std::nullopt};
  CHECK(lagrangian_radius_of_mass(inverse, 3.0, 2) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS(lagrangian_radius_of_mass(unit, -1.0, 2));
}

TEST_CASE("lagrangian radius inverts the mass integral") {
  // mass of the shell [1, r] computed independently by Simpson's rule
  const DensityProfile rho{[](double y) { return 1.0 + 0.5 * std::exp(-(y - 2.0) * (y - 2.0)); }, 1.0};
  for (double x : {0.5, 2.0, 6.0}) {
    const double r = lagrangian_radius_of_mass(rho, x, 3);
    const double mass = testing::simpson([&](double y) { return y * y * rho.rho(y); }, 1.0, r);
    CHECK(mass == doctest::Approx(x).epsilon(1e-10));
  }
}
