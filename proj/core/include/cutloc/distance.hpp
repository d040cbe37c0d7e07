#pragma once

#include "cutloc/mesh.hpp"
#include "cutloc/surfaces.hpp"

namespace cutloc {

struct DistanceField {
  VertexField values;
  std::vector<int> sources;
  int unreachable_count = 0;  // vertices left at +infinity
  int obtuse_fallbacks = 0;   // triangle updates that fell back to Dijkstra
};

/// Wavefront propagation of the geodesic distance to a source set, with the
/// two-neighbor planar-unfolding update and a Dijkstra fallback on obtuse
/// triangles.
DistanceField fast_march(const TriangleMesh& mesh, const std::vector<int>& sources);

inline DistanceField multi_source_distance(const TriangleMesh& mesh,
                                           const std::vector<int>& set) {
  return fast_march(mesh, set);
}

/// Exact geodesic distance on a built-in model surface. Parameters are a unit
/// 3-vector for the sphere and torus coordinates in [0,1)^2 for the flat torus
/// (only the first two components are read).
double analytic_distance(Surface surface, const Vec3& base, const Vec3& query);

}  // namespace cutloc
