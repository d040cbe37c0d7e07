#pragma once

#include <Eigen/Sparse>

#include "cutloc/mesh.hpp"

namespace cutloc {

/// Piecewise-linear FEM operators: u' * stiffness * u is the exact Dirichlet
/// energy of the linear interpolant; lumped_area discretizes the volume form.
struct Operators {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd lumped_area;
  double total_area = 0.0;
};

Operators build_operators(const TriangleMesh& mesh);

/// Per-face gradient of the linear interpolant, expressed in a 2D orthonormal
/// frame local to each face (column f). Works for intrinsic meshes.
Eigen::Matrix2Xd face_gradients_local(const TriangleMesh& mesh,
                                      const VertexField& u);

/// Per-face world-space gradients (embedded meshes only).
Eigen::Matrix3Xd face_gradients(const TriangleMesh& mesh, const VertexField& u);

Eigen::VectorXd face_gradient_norms(const TriangleMesh& mesh,
                                    const VertexField& u);

/// Area-weighted average of incident face-gradient norms.
VertexField vertex_gradient_norm(const TriangleMesh& mesh, const VertexField& u);

/// Sparse face-gradient operator G: vertex values -> stacked local 2-vectors
/// (rows 2f, 2f+1 are the frame components on face f).
Eigen::SparseMatrix<double> gradient_operator(const TriangleMesh& mesh);

struct CurvatureInfo {
  VertexField gauss_per_vertex;   // angle defect / lumped area
  VertexField angle_defect;       // raw angle defect per vertex
  double ricci_lower_bound = 0.0; // K = max(0, -min gauss density)
  double diameter_estimate = 0.0;
  double total_defect = 0.0;      // 2*pi*chi on closed meshes
  bool gauss_bonnet_checked = false;
};

CurvatureInfo curvature_info(const TriangleMesh& mesh);

/// Lower bound on m guaranteeing the gradient/obstacle equivalence:
/// (1/2) * max{ sqrt(n K (1 + K diam^2)), n K diam }.
double sufficient_m(double K, double diam, int n);

}  // namespace cutloc
