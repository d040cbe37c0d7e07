#include <cmath>
#include <numbers>

#include "cutloc/euclidean.hpp"
#include "doctest.h"

using namespace cutloc;

TEST_CASE("disk mesh covers the disk up to O(h^2)") {
  auto dom = disk_domain(1.0, 0.05);
  CHECK(dom.mesh.total_area() == doctest::Approx(std::numbers::pi).epsilon(0.01));
  CHECK(dom.mesh.has_boundary());
  REQUIRE(dom.boundary_loops.size() == 1);
}

TEST_CASE("rectangle mesh covers the rectangle exactly") {
  auto dom = rectangle_domain(2.0, 1.0, 0.05);
  CHECK(dom.mesh.total_area() == doctest::Approx(2.0).epsilon(1e-9));
  REQUIRE(dom.boundary_loops.size() == 1);
}

TEST_CASE("boundary distance oracles") {
  auto disk = disk_domain(1.0, 0.05);
  auto dd = boundary_distance(disk);
  // Center value is the apothem of the boundary polygon: 1 - O(h^2).
  CHECK(dd.values.maxCoeff() == doctest::Approx(1.0).epsilon(0.01));

  auto rect = rectangle_domain(2.0, 1.0, 0.05);
  auto dr = boundary_distance(rect);
  // Any midline vertex far from the short sides is at distance exactly 1/2.
  int mid = -1;
  for (int v = 0; v < rect.mesh.vertex_count(); ++v) {
    const auto& p = rect.mesh.positions();
    if (std::abs(p(v, 1) - 0.5) < 1e-9 && p(v, 0) > 0.7 && p(v, 0) < 1.3)
      mid = v;
  }
  REQUIRE(mid >= 0);
  CHECK(dr.values[mid] == doctest::Approx(0.5).epsilon(1e-9));
  for (int v : rect.boundary_loops[0]) CHECK(dr.values[v] == 0.0);
}

TEST_CASE("disk torsion: obstacle and gradient modes hit the radial oracle") {
  auto dom = disk_domain(1.0, 0.03);
  auto d = boundary_distance(dom);
  int center = 0;
  for (int v = 0; v < dom.mesh.vertex_count(); ++v)
    if (d.values[v] > d.values[center]) center = v;

  auto obs = solve_torsion(dom, 8.0, TorsionMode::Obstacle);
  REQUIRE(obs.converged);
  CHECK(obs.u[center] == doctest::Approx(0.75).epsilon(0.01 / 0.75));

  GradientConfig gcfg;
  gcfg.warm_start = obs.u;  // keeps the first-order solve short
  auto grad = solve_torsion(dom, 8.0, TorsionMode::Gradient, {}, gcfg);
  REQUIRE(grad.converged);
  CHECK(grad.u[center] == doctest::Approx(0.75).epsilon(0.01 / 0.75));
  CHECK((obs.u - grad.u).cwiseAbs().maxCoeff() <= 0.01);
}

TEST_CASE("small m leaves the constraint slack: pure torsion solution") {
  auto dom = disk_domain(1.0, 0.02);
  double m = 2.0;  // below 4/R, obstacle inactive
  auto rep = solve_torsion(dom, m, TorsionMode::Obstacle);
  REQUIRE(rep.converged);
  CHECK(rep.u.maxCoeff() == doctest::Approx(m / 8.0).epsilon(0.01));
}

TEST_CASE("disk medial ground truth") {
  auto dom = disk_domain(1.0, 0.02);
  auto mid = medial_ground_truth(dom, 0.5);
  CHECK(mid.count() == 1);
  auto d = boundary_distance(dom);
  CHECK(d.values[mid.indices()[0]] == doctest::Approx(1.0).epsilon(0.01));
  CHECK(medial_ground_truth(dom, 1.5).empty());
}

TEST_CASE("rectangle medial ground truth: segment plus corner branches") {
  auto dom = rectangle_domain(2.0, 1.0, 0.02);
  auto gt = medial_ground_truth(dom, 0.2);
  REQUIRE(!gt.empty());
  const auto& p = dom.mesh.positions();
  bool has_branch = false;
  for (int v : gt.indices()) {
    double x = p(v, 0), y = p(v, 1);
    double cx = std::min(x, 2.0 - x), cy = std::min(y, 1.0 - y);
    if (std::abs(y - 0.5) < 1e-9 && x >= 0.5 - 1e-9 && x <= 1.5 + 1e-9)
      continue;  // central segment
    // Otherwise a diagonal branch point at distance >= 2*lambda from a corner.
    CHECK(std::abs(cx - cy) <= 0.011);
    CHECK(std::hypot(cx, cy) >= 2.0 * 0.2 - 0.015);
    has_branch = true;
  }
  CHECK(has_branch);
  // Large lambda prunes the branches entirely.
  auto pruned = medial_ground_truth(dom, 0.45);
  for (int v : pruned.indices())
    CHECK(std::abs(p(v, 1) - 0.5) < 1e-9);
}

TEST_CASE("invalid domain parameters are rejected") {
  CHECK_THROWS_AS(disk_domain(-1.0, 0.02), std::invalid_argument);
  CHECK_THROWS_AS(rectangle_domain(2.0, 1.0, 0.0), std::invalid_argument);
}
