#include "cutloc/gradient.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

namespace cutloc {

FeasibilityReport feasibility_report(const TriangleMesh& mesh,
                                     const VertexField& u, double tol) {
  Eigen::VectorXd norms = face_gradient_norms(mesh, u);
  FeasibilityReport rep;
  rep.max_grad = norms.size() ? norms.maxCoeff() : 0.0;
  for (int f = 0; f < norms.size(); ++f)
    if (norms[f] > 1.0 + tol) ++rep.violating_faces;
  if (mesh.basepoint()) rep.u_at_basepoint = u[*mesh.basepoint()];
  return rep;
}

namespace {

struct PinnedSpace {
  std::vector<int> idx;  // vertex -> free index, -1 if pinned
  std::vector<int> inv;  // free index -> vertex
};

PinnedSpace pinned_space(const GradientProblem& p) {
  const int n = p.mesh->vertex_count();
  PinnedSpace sp;
  sp.idx.assign(n, -1);
  auto pinned = [&](int v) {
    if (p.bc == BoundaryCondition::ZeroOnBoundary)
      return p.mesh->is_boundary_vertex(v);
    return p.mesh->basepoint() && *p.mesh->basepoint() == v;
  };
  for (int v = 0; v < n; ++v)
    if (!pinned(v)) {
      sp.idx[v] = static_cast<int>(sp.inv.size());
      sp.inv.push_back(v);
    }
  if (sp.inv.size() == sp.idx.size())
    throw std::invalid_argument(
        "gradient-constrained solve needs a basepoint or a zero boundary "
        "condition; otherwise the quadratic is pure-Neumann singular");
  return sp;
}

Eigen::SparseMatrix<double> restrict_columns(
    const Eigen::SparseMatrix<double>& M, const PinnedSpace& sp) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < M.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, c); it; ++it)
      if (sp.idx[it.col()] >= 0)
        trips.emplace_back(static_cast<int>(it.row()), sp.idx[it.col()],
                           it.value());
  Eigen::SparseMatrix<double> R(M.rows(), static_cast<int>(sp.inv.size()));
  R.setFromTriplets(trips.begin(), trips.end());
  return R;
}

Eigen::SparseMatrix<double> restrict_symmetric(
    const Eigen::SparseMatrix<double>& S, const PinnedSpace& sp) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int c = 0; c < S.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(S, c); it; ++it)
      if (sp.idx[it.row()] >= 0 && sp.idx[it.col()] >= 0)
        trips.emplace_back(sp.idx[it.row()], sp.idx[it.col()], it.value());
  const int nf = static_cast<int>(sp.inv.size());
  Eigen::SparseMatrix<double> R(nf, nf);
  R.setFromTriplets(trips.begin(), trips.end());
  return R;
}

}  // namespace

SolveReport solve_gradient_constrained(const GradientProblem& p,
                                       const GradientConfig& cfg) {
  const int n = p.mesh->vertex_count();
  const int nfaces = p.mesh->face_count();
  SolveReport rep;
  if (p.m < 0.0) throw std::invalid_argument("gradient solve requires m >= 0");
  if (p.m == 0.0) {
    rep.u = VertexField::Zero(n);
    rep.converged = true;
    return rep;
  }
  if (p.bc == BoundaryCondition::ZeroOnBoundary && !p.mesh->has_boundary())
    throw std::invalid_argument("zero-on-boundary requested on a closed mesh");

  const PinnedSpace sp = pinned_space(p);
  const int nfree = static_cast<int>(sp.inv.size());
  const Eigen::SparseMatrix<double> G =
      restrict_columns(gradient_operator(*p.mesh), sp);
  const Eigen::SparseMatrix<double> Sfree =
      restrict_symmetric(p.ops->stiffness, sp);
  Eigen::VectorXd afree(nfree);
  for (int k = 0; k < nfree; ++k) afree[k] = p.ops->lumped_area[sp.inv[k]];

  // Diagonal step sizes from the row/column absolute sums of G.
  Eigen::VectorXd col_abs = Eigen::VectorXd::Zero(nfree);
  Eigen::VectorXd row_abs = Eigen::VectorXd::Zero(2 * nfaces);
  for (int c = 0; c < G.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(G, c); it; ++it) {
      col_abs[it.col()] += std::abs(it.value());
      row_abs[it.row()] += std::abs(it.value());
    }
  Eigen::VectorXd tau(nfree), sigma(nfaces);
  for (int k = 0; k < nfree; ++k)
    tau[k] = col_abs[k] > 0.0 ? 1.0 / col_abs[k] : 1.0;
  for (int f = 0; f < nfaces; ++f) {
    double r = std::max(row_abs[2 * f], row_abs[2 * f + 1]);
    sigma[f] = r > 0.0 ? 1.0 / r : 1.0;
  }

  // Primal prox solves (diag(1/tau) + 2S) u = rhs; prefactor once.
  Eigen::SparseMatrix<double> P = 2.0 * Sfree;
  for (int k = 0; k < nfree; ++k) P.coeffRef(k, k) += 1.0 / tau[k];
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> prox_solver(P);
  if (prox_solver.info() != Eigen::Success)
    throw std::runtime_error("primal prox factorization failed");
  // Dual certificates solve 2S u = rhs on the free space; prefactor once.
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> cert_solver(
      Eigen::SparseMatrix<double>(2.0 * Sfree));
  if (cert_solver.info() != Eigen::Success)
    throw std::runtime_error("stiffness factorization failed");
  const Eigen::VectorXd u_unconstrained = cert_solver.solve(p.m * afree);

  Eigen::VectorXd u(nfree);
  if (cfg.warm_start) {
    for (int k = 0; k < nfree; ++k) u[k] = (*cfg.warm_start)[sp.inv[k]];
  } else {
    u.setZero();
  }
  Eigen::VectorXd ubar = u, q = Eigen::VectorXd::Zero(2 * nfaces);

  auto expand = [&](const Eigen::VectorXd& uf) {
    VertexField full = VertexField::Zero(n);
    for (int k = 0; k < nfree; ++k) full[sp.inv[k]] = uf[k];
    return full;
  };
  auto energy_of = [&](const Eigen::VectorXd& uf) {
    return uf.dot(Sfree * uf) - p.m * afree.dot(uf);
  };

  // Best dual value achievable along the ray s*q, computed exactly from the
  // prefactored stiffness solve.
  auto dual_value = [&](const Eigen::VectorXd& qv) {
    double qnorm_sum = 0.0;
    for (int f = 0; f < nfaces; ++f)
      qnorm_sum += std::hypot(qv[2 * f], qv[2 * f + 1]);
    Eigen::VectorXd w = cert_solver.solve(G.transpose() * qv);
    double wSw = w.dot(Sfree * w);
    double beta = 2.0 * w.dot(Sfree * u_unconstrained);
    double s = wSw > 0.0 ? std::max(0.0, (beta - qnorm_sum) / (2.0 * wSw)) : 0.0;
    Eigen::VectorXd uhat = u_unconstrained - s * w;
    return energy_of(uhat) + s * qv.dot(G * uhat) - s * qnorm_sum;
  };

  const long max_iter =
      cfg.max_iter > 0
          ? cfg.max_iter
          : static_cast<long>(50000.0 * std::sqrt(double(n)));
  double gap_rel = std::numeric_limits<double>::infinity();
  FeasibilityReport feas;
  long it = 0;
  for (; it < max_iter; ++it) {
    // Dual ascent with per-face shrinkage (prox of sigma * |q_f|).
    Eigen::VectorXd y = G * ubar;
    for (int f = 0; f < nfaces; ++f) {
      double qx = q[2 * f] + sigma[f] * y[2 * f];
      double qy = q[2 * f + 1] + sigma[f] * y[2 * f + 1];
      double norm = std::hypot(qx, qy);
      double shrink = std::max(0.0, 1.0 - sigma[f] / std::max(norm, 1e-300));
      q[2 * f] = shrink * qx;
      q[2 * f + 1] = shrink * qy;
    }
    // Primal prox step.
    Eigen::VectorXd rhs =
        (u - (tau.array() * (G.transpose() * q).array()).matrix())
            .cwiseQuotient(tau) +
        p.m * afree;
    Eigen::VectorXd unew = prox_solver.solve(rhs);
    ubar = 2.0 * unew - u;
    u = unew;

    if ((it + 1) % cfg.check_every == 0) {
      VertexField full = expand(u);
      feas = feasibility_report(*p.mesh, full, 0.0);
      double scale = std::max(1.0, feas.max_grad);
      double primal = energy_of(u / scale);
      double dual = dual_value(q);
      double gap = primal - dual;
      gap_rel = gap / std::max(1.0, std::abs(primal));
      if (feas.max_grad <= 1.0 + cfg.tol_feas && gap_rel <= cfg.tol_gap) {
        ++it;
        break;
      }
    }
  }

  rep.u = expand(u);
  rep.iterations = it;
  feas = feasibility_report(*p.mesh, rep.u, 0.0);
  rep.max_grad = feas.max_grad;
  rep.duality_gap_rel = gap_rel;
  rep.energy = energy_of(u);
  rep.converged =
      feas.max_grad <= 1.0 + cfg.tol_feas && gap_rel <= cfg.tol_gap;
  return rep;
}

}  // namespace cutloc
