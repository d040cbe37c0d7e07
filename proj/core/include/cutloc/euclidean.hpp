#pragma once

#include "cutloc/distance.hpp"
#include "cutloc/gradient.hpp"
#include "cutloc/sets.hpp"

namespace cutloc {

/// Flat triangulated domain in the plane (z = 0) with boundary polylines.
struct PlanarDomain {
  enum class Shape { Disk, Rectangle, External };

  TriangleMesh mesh;
  Operators ops;
  std::vector<std::vector<int>> boundary_loops;  // ordered closed loops
  Shape shape = Shape::External;
  double R = 0.0;          // disk radius
  double L = 0.0, W = 0.0; // rectangle sides (L >= W)
};

/// Structured disk triangulation of radius R centered at the origin, max edge
/// length <= h. Vertex 0 is the exact center.
PlanarDomain disk_domain(double R, double h);

/// Structured rectangle [0,L] x [0,W] with the horizontal midline on the
/// grid, max edge length <= h.
PlanarDomain rectangle_domain(double L, double W, double h);

/// Wrap an externally supplied flat mesh (positions required, z ignored).
PlanarDomain external_domain(TriangleMesh mesh);

/// Exact Euclidean distance to the boundary polylines (not a mesh geodesic).
DistanceField boundary_distance(const PlanarDomain& domain);

enum class TorsionMode { Obstacle, Gradient };

/// Elastic-plastic torsion: the obstacle mode solves with u <= d_boundary and
/// zero boundary values; the gradient mode solves with |grad u| <= 1.
SolveReport solve_torsion(const PlanarDomain& domain, double m,
                          TorsionMode mode,
                          const ObstacleConfig& obstacle_config = {},
                          const GradientConfig& gradient_config = {});

/// Exact membership of mesh vertices in the lambda-medial-axis of a built-in
/// shape (lambda = 0 labels the medial axis itself). Vertices are matched to
/// the axis within half the mesh scale.
RegionLabeling medial_ground_truth(const PlanarDomain& domain, double lambda);

}  // namespace cutloc
