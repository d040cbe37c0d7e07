#pragma once

#include <string>

#include "cutloc/distance.hpp"
#include "cutloc/operators.hpp"
#include "cutloc/surfaces.hpp"

namespace cutloc {

/// Per-vertex membership labeling of a region (elastic set, cut-locus or
/// medial-axis oracle, ...).
struct RegionLabeling {
  std::vector<char> member;
  std::string definition;  // contact_gap | gradient_threshold | lambda_set | ground_truth
  double m = 0.0;
  double lambda = 0.0;
  double threshold = 0.0;

  int count() const;
  std::vector<int> indices() const;
  bool empty() const { return count() == 0; }
};

enum class ElasticMode { ContactGap, GradientThreshold };

/// Pinned default thresholds as functions of the mesh scale h.
inline double default_contact_gap(double h, double m) {
  return std::max(1e-6, h * h * m / 8.0);
}
inline double default_gradient_threshold(double h) {
  return std::max(0.02, 2.0 * h);
}

/// Non-contact set {d - u > eps} or low-gradient set {|grad u| < 1 - eps}.
RegionLabeling elastic_set(const TriangleMesh& mesh, const VertexField& u,
                           const VertexField& d, ElasticMode mode, double eps);

/// {u > lambda and |grad u|^2 <= 1 - lambda^2/u^2 + eps_g}.
RegionLabeling lambda_elastic_set(const TriangleMesh& mesh,
                                  const VertexField& u, double lambda,
                                  double eps_g);

/// Generalized gradient magnitude from the unit initial velocities of the
/// minimizing geodesics at a point: max{0, max_{|v|=1} min_k(-dir_k . v)}.
double gen_grad_from_directions(const std::vector<Eigen::Vector2d>& dirs);

/// Exact membership of mesh vertices in the lambda-cut-locus of a model
/// surface (basepoint: north pole / torus origin). lambda = 0 labels the
/// plain cut locus.
RegionLabeling ground_truth_cut(Surface surface, const TriangleMesh& mesh,
                                double lambda);

struct HausdorffReport {
  double sup_A_to_B = 0.0;
  double sup_B_to_A = 0.0;
  double symmetric = 0.0;
  bool A_empty = false;
  bool B_empty = false;
};

/// One-sided sup distances between labeled vertex sets in the mesh geodesic
/// metric (multi-source wavefront propagation).
HausdorffReport hausdorff(const TriangleMesh& mesh, const RegionLabeling& A,
                          const RegionLabeling& B);

}  // namespace cutloc
