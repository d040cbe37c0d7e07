#include <cstdio>
#include <fstream>
#include <string>

#include "cutloc/io.hpp"
#include "cutloc/surfaces.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace cutloc;
using cutloc_tests::planar_grid;

namespace {

std::string tmp_path(const std::string& name) {
  return std::string("/tmp/cutloc_io_") + name;
}

}  // namespace

TEST_CASE("OFF round trip preserves geometry") {
  auto mesh = planar_grid(4, 4);
  auto path = tmp_path("grid.off");
  write_off(path, mesh);
  auto back = read_off(path);
  CHECK(back.vertex_count() == mesh.vertex_count());
  CHECK(back.face_count() == mesh.face_count());
  CHECK((back.positions() - mesh.positions()).cwiseAbs().maxCoeff() < 1e-14);
  std::remove(path.c_str());
}

TEST_CASE("intrinsic round trip preserves edge lengths") {
  auto mesh = flat_torus_grid(8);
  auto path = tmp_path("torus.intrinsic");
  write_intrinsic(path, mesh);
  auto back = read_intrinsic(path);
  CHECK(back.vertex_count() == mesh.vertex_count());
  CHECK(back.edge_count() == mesh.edge_count());
  CHECK(back.total_area() == doctest::Approx(mesh.total_area()).epsilon(1e-12));
  std::remove(path.c_str());
}

TEST_CASE("read_mesh dispatches on the header") {
  auto mesh = flat_torus_grid(4);
  auto path = tmp_path("dispatch.txt");
  write_intrinsic(path, mesh);
  auto back = read_mesh(path);
  CHECK(back.vertex_count() == 16);
  std::remove(path.c_str());
}

TEST_CASE("field CSV round trip is exact") {
  VertexField f(5);
  f << 0.1, -2.0, 3.14159265358979, 0.0, 1e-17;
  auto path = tmp_path("field.csv");
  write_field_csv(path, f);
  auto back = read_field_csv(path);
  REQUIRE(back.size() == 5);
  CHECK((back - f).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("VTK export writes a readable polydata file") {
  auto mesh = planar_grid(2, 2);
  VertexField f = mesh.positions().col(0);
  auto path = tmp_path("out.vtk");
  write_vtk(path, mesh, {{"x", f}});
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  CHECK(line.find("vtk") != std::string::npos);
  bool has_field = false;
  while (std::getline(in, line))
    if (line.find("SCALARS x") != std::string::npos) has_field = true;
  CHECK(has_field);
  std::remove(path.c_str());
}

TEST_CASE("missing and malformed files raise IoError") {
  CHECK_THROWS_AS(read_off("/tmp/cutloc_io_missing.off"), IoError);
  auto path = tmp_path("bad.off");
  std::ofstream(path) << "OFF\n3 1 0\n0 0 0\n1 0 0\n";  // truncated
  CHECK_THROWS_AS(read_off(path), IoError);
  std::remove(path.c_str());
}
