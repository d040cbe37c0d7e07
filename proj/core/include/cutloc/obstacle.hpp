#pragma once

#include <Eigen/Sparse>
#include <algorithm>
#include <optional>

#include "cutloc/operators.hpp"

namespace cutloc {

enum class BoundaryCondition { None, ZeroOnBoundary };

/// min  u' S u - m a' u   s.t.  u <= d  (and optionally u >= 0),
/// with zero boundary values on planar domains.
struct ObstacleProblem {
  const TriangleMesh* mesh = nullptr;
  const Operators* ops = nullptr;
  VertexField obstacle;
  double m = 0.0;
  BoundaryCondition bc = BoundaryCondition::None;
  bool lower_bound_zero = false;
};

struct ObstacleConfig {
  double tol = 1e-8;
  long max_iter = -1;  // default 200 * vertex_count coordinate updates
  double omega = 1.5;
  bool active_set_refinement = true;
  std::optional<VertexField> warm_start;
};

struct KktResidual {
  double infeasibility = 0.0;
  double stationarity = 0.0;
  double complementarity = 0.0;
  double max() const {
    return std::max({infeasibility, stationarity, complementarity});
  }
};

struct SolveReport {
  VertexField u;
  long iterations = 0;
  double energy = 0.0;
  double kkt_infeasibility = 0.0;
  double kkt_stationarity = 0.0;
  double kkt_complementarity = 0.0;
  std::vector<char> active;  // contact set {u = d} up to tolerance
  bool converged = false;
  std::vector<double> energy_trace;  // energy after each Gauss-Seidel sweep
  // Gradient-solver extras (unused by the obstacle path):
  double max_grad = 0.0;
  double duality_gap_rel = 0.0;
};

SolveReport solve_obstacle(const ObstacleProblem& problem,
                           const ObstacleConfig& config = {});

KktResidual kkt_residual(const ObstacleProblem& problem, const VertexField& u);

double quadratic_energy(const Operators& ops, double m, const VertexField& u);

}  // namespace cutloc
