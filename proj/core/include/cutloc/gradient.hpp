#pragma once

#include "cutloc/obstacle.hpp"

namespace cutloc {

/// min  u' S u - m a' u   s.t.  |grad u| <= 1 on every face,
/// with u = 0 at the basepoint (closed surfaces) or on the boundary
/// (planar domains).
struct GradientProblem {
  const TriangleMesh* mesh = nullptr;
  const Operators* ops = nullptr;
  double m = 0.0;
  BoundaryCondition bc = BoundaryCondition::None;
};

struct GradientConfig {
  double tol_feas = 1e-6;  // allowed excess of max |grad u| over 1
  double tol_gap = 1e-7;   // relative duality gap at termination
  long max_iter = -1;      // default 50000 * sqrt(vertex_count)
  long check_every = 50;   // iterations between certificate checks
  std::optional<VertexField> warm_start;
};

struct FeasibilityReport {
  double max_grad = 0.0;
  int violating_faces = 0;        // faces with |grad u| > 1 + tol
  double u_at_basepoint = 0.0;    // 0 when the mesh has no basepoint
};

SolveReport solve_gradient_constrained(const GradientProblem& problem,
                                       const GradientConfig& config = {});

FeasibilityReport feasibility_report(const TriangleMesh& mesh,
                                     const VertexField& u,
                                     double tol = 1e-6);

}  // namespace cutloc
