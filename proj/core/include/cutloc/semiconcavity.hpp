#pragma once

#include <functional>
#include <limits>

#include "cutloc/surfaces.hpp"

namespace cutloc {

/// Closed-form unit-speed geodesic segment on a model geometry, restricted to
/// parameters [a, b] chosen to stay outside the ball B_rho(basepoint).
struct GeodesicSample {
  enum class Kind { Planar, Sphere, Torus };
  Kind kind = Kind::Planar;
  double a = 0.0, b = 0.0;
  Vec3 origin = Vec3::Zero();  // point at t = 0 (sphere: unit vector)
  Vec3 dir = Vec3::Zero();     // unit velocity (sphere: unit tangent at origin)

  Vec3 point_at(double t) const;  // torus coordinates reduced mod 1
  double length() const { return b - a; }
};

/// Deterministic random geodesics on a model surface, clipped to avoid
/// B_rho(basepoint). Planar samples are segments inside [-extent, extent]^2
/// with rho ignored.
std::vector<GeodesicSample> sample_geodesics(GeodesicSample::Kind kind,
                                             int count, double max_length,
                                             double rho, unsigned seed,
                                             double planar_extent = 1.0);

struct SemiconcavityReport {
  double C_hat = -std::numeric_limits<double>::infinity();
  int worst_sample = -1;
  double worst_a = 0.0, worst_b = 0.0, worst_lambda = 0.0;
  long chords_evaluated = 0;
};

using FieldEvaluator = std::function<double(const Vec3&)>;

/// C_hat = max over chords [a,b] of the samples and lambda of
/// ((1-l) u(g(a)) + l u(g(b)) - u(g(l_ab))) / (l (1-l) (b-a)^2).
/// Chords shorter than min_chord are skipped.
SemiconcavityReport estimate_semiconcavity(
    const FieldEvaluator& u, const std::vector<GeodesicSample>& samples,
    double min_chord = 0.0, int chord_nodes = 17);

/// Piecewise-linear interpolation of a vertex field at 3D points (embedded or
/// planar meshes): nearest vertex, then the best incident face's barycentric
/// coordinates (clamped).
FieldEvaluator mesh_field_evaluator(const TriangleMesh& mesh, VertexField u);

/// Interpolation on the structured flat-torus grid (exact cell lookup).
FieldEvaluator torus_field_evaluator(const TriangleMesh& mesh, VertexField u);

}  // namespace cutloc
