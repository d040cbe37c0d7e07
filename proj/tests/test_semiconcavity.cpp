#include <cmath>
#include <numbers>

#include "cutloc/distance.hpp"
#include "cutloc/obstacle.hpp"
#include "cutloc/semiconcavity.hpp"
#include "cutloc/surfaces.hpp"
#include "doctest.h"

using namespace cutloc;

TEST_CASE("planar samples are unit-speed straight segments inside the box") {
  auto samples =
      sample_geodesics(GeodesicSample::Kind::Planar, 20, 1.0, 0.0, 3, 1.0);
  REQUIRE(samples.size() == 20);
  for (const auto& g : samples) {
    CHECK(g.dir.norm() == doctest::Approx(1.0).epsilon(1e-12));
    Vec3 p = g.point_at(g.a), q = g.point_at(g.b);
    CHECK((q - p).norm() == doctest::Approx(g.b - g.a).epsilon(1e-9));
    CHECK(std::abs(q.x()) <= 1.0 + 1e-6);
    CHECK(std::abs(q.y()) <= 1.0 + 1e-6);
  }
}

TEST_CASE("torus samples wrap into the unit square and avoid the basepoint") {
  double rho = 0.2;
  auto samples =
      sample_geodesics(GeodesicSample::Kind::Torus, 20, 0.8, rho, 5);
  for (const auto& g : samples)
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      Vec3 p = g.point_at(g.a + s * (g.b - g.a));
      CHECK(p.x() >= 0.0);
      CHECK(p.x() < 1.0);
      Eigen::Vector2d w =
          torus_displacement({p.x(), p.y()}, Eigen::Vector2d::Zero());
      CHECK(w.norm() >= rho - 1e-6);
    }
}

TEST_CASE("sampling is deterministic in the seed") {
  auto a = sample_geodesics(GeodesicSample::Kind::Sphere, 10, 1.0,
                            std::numbers::pi / 4, 42);
  auto b = sample_geodesics(GeodesicSample::Kind::Sphere, 10, 1.0,
                            std::numbers::pi / 4, 42);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].a == b[i].a);
    CHECK(a[i].b == b[i].b);
    CHECK((a[i].origin - b[i].origin).norm() == 0.0);
  }
}

TEST_CASE("linear fields have non-positive semiconcavity excess") {
  auto samples =
      sample_geodesics(GeodesicSample::Kind::Planar, 50, 1.0, 0.0, 1, 1.0);
  auto rep = estimate_semiconcavity(
      [](const Vec3& p) { return 0.3 * p.x() - 0.7 * p.y(); }, samples);
  CHECK(rep.C_hat <= 1e-9);
}

TEST_CASE("quadratic field |x|^2 has constant exactly 1") {
  auto samples =
      sample_geodesics(GeodesicSample::Kind::Planar, 50, 1.0, 0.0, 1, 1.0);
  auto rep = estimate_semiconcavity(
      [](const Vec3& p) { return p.x() * p.x() + p.y() * p.y(); }, samples);
  CHECK(rep.C_hat == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.chords_evaluated > 0);
}

TEST_CASE("spherical distance has semiconcavity constant 1/2 off the pole") {
  auto samples = sample_geodesics(GeodesicSample::Kind::Sphere, 500, 1.5,
                                  std::numbers::pi / 4, 11);
  auto rep = estimate_semiconcavity(
      [](const Vec3& p) { return std::acos(std::clamp(p.z(), -1.0, 1.0)); },
      samples);
  CHECK(rep.C_hat == doctest::Approx(0.5).epsilon(0.10));
}

TEST_CASE("mesh evaluator reproduces vertex values and linear fields") {
  auto mesh = icosphere(4);
  VertexField u = mesh.positions().col(2);  // z-coordinate, linear in space
  auto eval = mesh_field_evaluator(mesh, u);
  for (int v = 0; v < mesh.vertex_count(); v += 97) {
    Vec3 p = mesh.positions().row(v);
    CHECK(eval(p) == doctest::Approx(u[v]).epsilon(1e-9));
  }
}

TEST_CASE("torus evaluator is periodic and exact at grid nodes") {
  auto mesh = flat_torus_grid(16);
  VertexField u(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    auto p = torus_coords(mesh, v);
    u[v] = std::sin(2.0 * std::numbers::pi * p.x());
  }
  auto eval = torus_field_evaluator(mesh, u);
  CHECK(eval(Vec3(0.25, 0.5, 0)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(eval(Vec3(1.25, 0.5, 0)) ==
        doctest::Approx(eval(Vec3(0.25, 0.5, 0))).epsilon(1e-9));
}

TEST_CASE("invalid sampling arguments are rejected") {
  CHECK_THROWS_AS(sample_geodesics(GeodesicSample::Kind::Planar, 0, 1.0, 0.1, 1),
                  std::invalid_argument);
  auto samples =
      sample_geodesics(GeodesicSample::Kind::Planar, 5, 1.0, 0.0, 1, 1.0);
  CHECK_THROWS_AS(
      estimate_semiconcavity([](const Vec3&) { return 0.0; }, samples, 0.0, 2),
      std::invalid_argument);
  CHECK_THROWS_AS(
      estimate_semiconcavity([](const Vec3&) { return 0.0; }, {}, 0.0, 17),
      std::invalid_argument);
}
