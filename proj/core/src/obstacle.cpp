#include "cutloc/obstacle.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

namespace cutloc {

namespace {

double activation_threshold(double d) { return 1e-10 * (1.0 + std::abs(d)); }

}  // namespace

double quadratic_energy(const Operators& ops, double m, const VertexField& u) {
  return u.dot(ops.stiffness * u) - m * ops.lumped_area.dot(u);
}

KktResidual kkt_residual(const ObstacleProblem& p, const VertexField& u) {
  const auto& S = p.ops->stiffness;
  const auto& a = p.ops->lumped_area;
  const VertexField& d = p.obstacle;
  const int n = static_cast<int>(u.size());
  const bool zero_bc = p.bc == BoundaryCondition::ZeroOnBoundary;

  Eigen::VectorXd r = 2.0 * (S * u) - p.m * a;  // gradient of the energy
  KktResidual out;
  for (int i = 0; i < n; ++i) {
    bool fixed = zero_bc && p.mesh->is_boundary_vertex(i);
    out.infeasibility = std::max(out.infeasibility, u[i] - d[i]);
    if (p.lower_bound_zero) out.infeasibility = std::max(out.infeasibility, -u[i]);
    if (fixed) continue;
    bool act_up = d[i] - u[i] <= activation_threshold(d[i]);
    bool act_lo = p.lower_bound_zero && u[i] <= activation_threshold(0.0);
    if (!act_up && !act_lo)
      out.stationarity = std::max(out.stationarity, std::abs(r[i]) / a[i]);
    double mu = -r[i];  // multiplier of u <= d
    out.complementarity =
        std::max(out.complementarity, std::min(d[i] - u[i], std::max(0.0, -mu)));
    if (p.lower_bound_zero)
      out.complementarity =
          std::max(out.complementarity, std::min(u[i], std::max(0.0, r[i])));
  }
  out.infeasibility = std::max(0.0, out.infeasibility);
  return out;
}

SolveReport solve_obstacle(const ObstacleProblem& p, const ObstacleConfig& cfg) {
  const auto& S = p.ops->stiffness;
  const auto& a = p.ops->lumped_area;
  const VertexField& d = p.obstacle;
  const int n = static_cast<int>(d.size());
  if (p.m <= 0.0) throw std::invalid_argument("obstacle solve requires m > 0");
  if (!d.allFinite())
    throw std::invalid_argument(
        "obstacle is not finite: on a closed mesh with no boundary condition "
        "and no finite obstacle the quadratic is pure-Neumann singular");
  const bool zero_bc = p.bc == BoundaryCondition::ZeroOnBoundary;
  if (zero_bc && !p.mesh->has_boundary())
    throw std::invalid_argument("zero-on-boundary requested on a closed mesh");

  std::vector<char> fixed(n, 0);
  for (int i = 0; i < n; ++i)
    if (zero_bc && p.mesh->is_boundary_vertex(i)) fixed[i] = 1;

  auto clamp_feasible = [&](VertexField& u) {
    for (int i = 0; i < n; ++i) {
      if (fixed[i]) {
        u[i] = 0.0;
        continue;
      }
      u[i] = std::min(u[i], d[i]);
      if (p.lower_bound_zero) u[i] = std::max(u[i], 0.0);
    }
  };

  SolveReport rep;
  rep.u = cfg.warm_start ? *cfg.warm_start : d;
  clamp_feasible(rep.u);

  const long max_iter = cfg.max_iter > 0 ? cfg.max_iter : 200L * n;
  const long max_sweeps = std::max<long>(1, max_iter / std::max(1, n));

  // Projected SOR sweeps. With active-set refinement enabled these only warm
  // up the active-set guess.
  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) diag[i] = S.coeff(i, i);
  long pgs_sweeps = cfg.active_set_refinement ? std::min<long>(30, max_sweeps)
                                              : max_sweeps;
  KktResidual kkt;
  for (long sweep = 0; sweep < pgs_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) {
      if (fixed[i] || diag[i] <= 0.0) continue;
      double off = 0.0;
      for (Eigen::SparseMatrix<double>::InnerIterator it(S, i); it; ++it)
        if (it.row() != i) off += it.value() * rep.u[it.row()];
      double z = (0.5 * p.m * a[i] - off) / diag[i];
      double v = rep.u[i] + cfg.omega * (z - rep.u[i]);
      v = std::min(v, d[i]);
      if (p.lower_bound_zero) v = std::max(v, 0.0);
      rep.u[i] = v;
    }
    ++rep.iterations;
    rep.energy_trace.push_back(quadratic_energy(*p.ops, p.m, rep.u));
    if (!cfg.active_set_refinement && sweep % 25 == 24) {
      kkt = kkt_residual(p, rep.u);
      if (kkt.max() <= cfg.tol) break;
    }
  }

  if (cfg.active_set_refinement) {
    std::vector<char> act_up(n, 0), act_lo(n, 0);
    for (int i = 0; i < n; ++i) {
      act_up[i] = !fixed[i] && d[i] - rep.u[i] <= activation_threshold(d[i]);
      act_lo[i] = !fixed[i] && p.lower_bound_zero && !act_up[i] &&
                  rep.u[i] <= activation_threshold(0.0);
    }
    const int max_rounds = 60;
    for (int round = 0; round < max_rounds; ++round) {
      // Assemble and solve the reduced system on the inactive set.
      std::vector<int> idx(n, -1), inv;
      for (int i = 0; i < n; ++i)
        if (!fixed[i] && !act_up[i] && !act_lo[i]) {
          idx[i] = static_cast<int>(inv.size());
          inv.push_back(i);
        }
      const int nf = static_cast<int>(inv.size());
      if (nf == 0) {
        // Fully constrained; nothing to solve.
      } else {
        bool any_pinned = static_cast<int>(inv.size()) < n;
        if (!any_pinned)
          throw std::runtime_error(
              "obstacle problem is pure-Neumann singular: closed mesh with no "
              "boundary condition and no contact");
        std::vector<Eigen::Triplet<double>> trips;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
        for (int i = 0; i < n; ++i) {
          if (idx[i] < 0) continue;
          rhs[idx[i]] = 0.5 * p.m * a[i];
          for (Eigen::SparseMatrix<double>::InnerIterator it(S, i); it; ++it) {
            int j = static_cast<int>(it.row());
            if (idx[j] >= 0)
              trips.emplace_back(idx[i], idx[j], it.value());
            else {
              double uj = fixed[j] ? 0.0 : (act_up[j] ? d[j] : 0.0);
              rhs[idx[i]] -= it.value() * uj;
            }
          }
        }
        Eigen::SparseMatrix<double> Sf(nf, nf);
        Sf.setFromTriplets(trips.begin(), trips.end());
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(Sf);
        if (solver.info() != Eigen::Success)
          throw std::runtime_error("reduced obstacle system factorization failed");
        Eigen::VectorXd uf = solver.solve(rhs);
        // One step of iterative refinement for tight stationarity.
        uf += solver.solve(rhs - Sf * uf);
        for (int k = 0; k < nf; ++k) rep.u[inv[k]] = uf[k];
        for (int i = 0; i < n; ++i) {
          if (idx[i] >= 0) continue;
          rep.u[i] = fixed[i] ? 0.0 : (act_up[i] ? d[i] : 0.0);
        }
      }
      ++rep.iterations;
      rep.energy_trace.push_back(quadratic_energy(*p.ops, p.m, rep.u));

      // Exchange step: primal violations become active, wrong-signed
      // multipliers are released.
      Eigen::VectorXd r = 2.0 * (S * rep.u) - p.m * a;
      bool changed = false;
      for (int i = 0; i < n; ++i) {
        if (fixed[i]) continue;
        if (!act_up[i] && !act_lo[i]) {
          if (rep.u[i] > d[i]) {
            act_up[i] = 1;
            changed = true;
          } else if (p.lower_bound_zero && rep.u[i] < 0.0) {
            act_lo[i] = 1;
            changed = true;
          }
        } else if (act_up[i] && -r[i] < 0.0) {
          act_up[i] = 0;
          changed = true;
        } else if (act_lo[i] && r[i] < 0.0) {
          act_lo[i] = 0;
          changed = true;
        }
      }
      if (!changed) {
        clamp_feasible(rep.u);
        kkt = kkt_residual(p, rep.u);
        break;
      }
      if (round == max_rounds - 1) {
        clamp_feasible(rep.u);
        kkt = kkt_residual(p, rep.u);
      }
    }
  } else {
    kkt = kkt_residual(p, rep.u);
  }

  kkt = kkt_residual(p, rep.u);
  rep.kkt_infeasibility = kkt.infeasibility;
  rep.kkt_stationarity = kkt.stationarity;
  rep.kkt_complementarity = kkt.complementarity;
  rep.converged = kkt.max() <= cfg.tol;
  rep.energy = quadratic_energy(*p.ops, p.m, rep.u);
  rep.active.assign(n, 0);
  for (int i = 0; i < n; ++i)
    rep.active[i] = d[i] - rep.u[i] <= activation_threshold(d[i]) ? 1 : 0;
  return rep;
}

}  // namespace cutloc
