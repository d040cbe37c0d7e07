#pragma once

#include "cutloc/mesh.hpp"

namespace cutloc {

/// Built-in closed model surfaces with known geodesic structure.
enum class Surface { UnitSphere, FlatUnitTorus };

/// Geodesic icosphere of the unit sphere with vertices at both poles.
/// Vertex 0 is the north pole (0,0,1); vertex 1 the south pole.
TriangleMesh icosphere(int subdivisions);

/// Intrinsic n-by-n grid of the flat unit torus [0,1)^2 (exact flat metric,
/// no embedding). Vertex (i,j) -> i*n + j at coordinates (i/n, j/n), kept as
/// positions (x, y, 0) for output. Vertex 0 is the origin.
TriangleMesh flat_torus_grid(int n);

/// Grid coordinates of a flat-torus vertex.
inline Eigen::Vector2d torus_coords(const TriangleMesh& mesh, int v) {
  const auto& p = mesh.positions();
  return {p(v, 0), p(v, 1)};
}

/// Shortest wrap-around displacement from a to b on the unit torus,
/// component-wise in [-1/2, 1/2].
Eigen::Vector2d torus_displacement(const Eigen::Vector2d& a,
                                   const Eigen::Vector2d& b);

}  // namespace cutloc
