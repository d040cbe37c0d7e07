#include <cmath>
#include <numbers>

#include "cutloc/revolution.hpp"
#include "doctest.h"

using namespace cutloc;

namespace {

// Closed-form value of the 1-D sphere solution at the far pole:
// slope (m/2) cot(t/2) on the elastic part, matched at t* = 2 atan(m/2).
double sphere_far_value(double m) {
  double tstar = 2.0 * std::atan(m / 2.0);
  return tstar - m * std::log(std::sin(tstar / 2.0));
}

}  // namespace

TEST_CASE("sphere profile geometry") {
  auto prof = sphere_profile(1001);
  CHECK(prof.T() == doctest::Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(prof.r[500] == doctest::Approx(1.0).epsilon(1e-9));  // r(pi/2)
  double max_slope = 0.0;
  for (int k = 0; k + 1 < prof.size(); ++k)
    max_slope = std::max(max_slope, std::abs(prof.r[k + 1] - prof.r[k]) /
                                        (prof.t[k + 1] - prof.t[k]));
  CHECK(max_slope <= 1.0 + 1e-12);
}

TEST_CASE("sphere obstacle solve matches the closed form at the far pole") {
  auto prof = sphere_profile(2001);
  auto rep = solve_obstacle_1d(prof, 10.0);
  REQUIRE(rep.converged);
  CHECK(rep.rho.back() == doctest::Approx(sphere_far_value(10.0)).epsilon(0.01 / 2.943));
  CHECK(rep.rho.back() == doctest::Approx(2.943).epsilon(0.01 / 2.943));
  CHECK(rep.kkt <= 1e-8);
}

TEST_CASE("huge m clamps to the obstacle except near the far pole") {
  auto prof = sphere_profile(2001);
  double m = 1e4;
  auto rep = solve_obstacle_1d(prof, m);
  REQUIRE(rep.converged);
  // The weight r(t) vanishes at the far pole, so the last couple of nodes
  // are essentially unweighted; audit the gap outside that neighborhood.
  double dt = prof.t[1] - prof.t[0];
  double cutoff = std::numbers::pi - std::max(10.0 / m, 2.5 * dt);
  double sup_gap = 0.0;
  for (int k = 0; k < prof.size(); ++k)
    if (prof.t[k] <= cutoff)
      sup_gap = std::max(sup_gap, prof.t[k] - rep.rho[k]);
  CHECK(sup_gap <= 3e-4);
}

TEST_CASE("gradient mode: m = 0 gives zero, sphere matches obstacle") {
  auto prof = sphere_profile(1001);
  auto z = solve_gradient_1d(prof, 0.0);
  CHECK(z.converged);
  for (double v : z.rho) CHECK(v == doctest::Approx(0.0));

  auto g = solve_gradient_1d(prof, 10.0);
  auto o = solve_obstacle_1d(prof, 10.0);
  REQUIRE(g.converged);
  REQUIRE(o.converged);
  CHECK(g.sup_gradient <= 1.0 + 1e-12);
  double sup = 0.0;
  for (int k = 0; k < prof.size(); ++k)
    sup = std::max(sup, std::abs(g.rho[k] - o.rho[k]));
  CHECK(sup <= 1e-3);
}

TEST_CASE("invalid inputs are rejected") {
  auto prof = sphere_profile(1001);
  CHECK_THROWS_AS(solve_obstacle_1d(prof, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_gradient_1d(prof, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(sphere_profile(2), std::invalid_argument);
  // Neck wider than the bulb makes the |r'| <= 1 transition infeasible.
  CHECK_THROWS_AS(dumbbell_profile(2.0, 1.0, 1.0, 2.0, 501),
                  std::invalid_argument);
}

TEST_CASE("dumbbell profile is feasible and symmetric") {
  auto prof = dumbbell_profile(0.01, 0.5, 1.0, 2.0, 1001);
  prof.validate();
  double max_slope = 0.0;
  for (int k = 0; k + 1 < prof.size(); ++k)
    max_slope = std::max(max_slope, std::abs(prof.r[k + 1] - prof.r[k]) /
                                        (prof.t[k + 1] - prof.t[k]));
  CHECK(max_slope <= 1.0 + 1e-9);
  for (int k = 0; k < prof.size(); ++k) {
    int j = prof.size() - 1 - k;
    CHECK(prof.r[k] == doctest::Approx(prof.r[j]).epsilon(1e-9));
  }
}

TEST_CASE("counterexample search: sphere family yields no witness") {
  std::vector<RevolutionProfile> fam{sphere_profile(801), sphere_profile(1601)};
  auto witnesses = counterexample_search(fam, {0.5, 2.0, 10.0});
  CHECK(witnesses.empty());
}

TEST_CASE("counterexample search finds a dumbbell witness") {
  std::vector<RevolutionProfile> fam{
      dumbbell_profile(1e-3, 1.0, 1.0, 8.0, 2001)};
  auto witnesses = counterexample_search(fam, {0.01, 0.1});
  REQUIRE(!witnesses.empty());
  CHECK(witnesses[0].sup_gradient >= 1.05);
  CHECK(witnesses[0].equivalence_gap >= 0.01);
}
