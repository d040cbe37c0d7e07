#pragma once

#include <string>
#include <vector>

#include "cutloc/mesh.hpp"

namespace cutloc {

/// Unit-speed meridian profile r(t) of a surface of revolution on [0, T]:
/// r(0) = 0 (pole), r > 0 inside, |dr/dt| <= 1.
struct RevolutionProfile {
  std::vector<double> t;
  std::vector<double> r;
  std::string name;

  double T() const { return t.back(); }
  int size() const { return static_cast<int>(t.size()); }
  void validate() const;
};

/// r(t) = sin(t) on [0, pi].
RevolutionProfile sphere_profile(int nt);

/// Mirror-symmetric bulb--neck--bulb profile with cosine ramps between the
/// plateau radii (peak slope exactly 1). The neck center sits on a grid node
/// when nt is odd.
RevolutionProfile dumbbell_profile(double neck_r, double neck_len,
                                   double bulb_r, double bulb_len, int nt);

struct Solve1DReport {
  std::vector<double> rho;
  double sup_gradient = 0.0;  // max |d rho / dt| over intervals
  double energy = 0.0;
  double kkt = 0.0;               // obstacle mode
  double duality_gap_rel = 0.0;   // gradient mode
  long iterations = 0;
  bool converged = false;
};

struct Solve1DConfig {
  double tol = 1e-10;      // obstacle KKT tolerance
  double tol_feas = 1e-6;  // gradient: allowed slope excess
  double tol_gap = 1e-7;   // gradient: relative duality gap
  long max_iter = 400000;
};

/// min sum((d rho/dt)^2 - m rho) r dt  s.t.  rho(t) <= t, rho(0) = 0.
Solve1DReport solve_obstacle_1d(const RevolutionProfile& profile, double m,
                                const Solve1DConfig& config = {});

/// Same energy over {|d rho/dt| <= 1 on every interval, rho(0) = 0}.
Solve1DReport solve_gradient_1d(const RevolutionProfile& profile, double m,
                                const Solve1DConfig& config = {});

struct EquivalenceWitness {
  std::string profile_name;
  double m = 0.0;
  double sup_gradient = 0.0;   // of the obstacle solution
  double equivalence_gap = 0.0;  // sup norm between the two solutions
};

/// All (profile, m) pairs whose obstacle solution violates the unit gradient
/// bound by more than the margin. An empty list is a valid outcome.
std::vector<EquivalenceWitness> counterexample_search(
    const std::vector<RevolutionProfile>& profiles,
    const std::vector<double>& m_grid, double margin = 0.05,
    const Solve1DConfig& config = {});

}  // namespace cutloc
