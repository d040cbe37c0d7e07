#include "cutloc/euclidean.hpp"

#include <cmath>
#include <numbers>

namespace cutloc {

namespace {

// One ordered loop per boundary component, walked along boundary edges.
std::vector<std::vector<int>> trace_boundary_loops(const TriangleMesh& mesh) {
  std::vector<std::vector<int>> adj(mesh.vertex_count());
  for (const Edge& e : mesh.edges())
    if (e.face1 < 0) {
      adj[e.i].push_back(e.j);
      adj[e.j].push_back(e.i);
    }
  std::vector<char> used(mesh.vertex_count(), 0);
  std::vector<std::vector<int>> loops;
  for (int v0 = 0; v0 < mesh.vertex_count(); ++v0) {
    if (adj[v0].empty() || used[v0]) continue;
    std::vector<int> loop{v0};
    used[v0] = 1;
    int prev = -1, cur = v0;
    while (true) {
      int next = -1;
      for (int w : adj[cur])
        if (w != prev && !(w == v0 && loop.size() < 3)) {
          next = w;
          break;
        }
      if (next < 0 || next == v0) break;
      if (used[next]) break;
      loop.push_back(next);
      used[next] = 1;
      prev = cur;
      cur = next;
    }
    if (loop.size() >= 3) loops.push_back(std::move(loop));
  }
  return loops;
}

PlanarDomain finish_domain(TriangleMesh mesh, PlanarDomain::Shape shape) {
  if (!mesh.has_boundary())
    throw MeshError("planar domain must have a boundary");
  Operators ops = build_operators(mesh);
  std::vector<std::vector<int>> loops = trace_boundary_loops(mesh);
  return PlanarDomain{std::move(mesh), std::move(ops), std::move(loops), shape};
}

}  // namespace

PlanarDomain disk_domain(double R, double h) {
  if (R <= 0.0 || h <= 0.0) throw std::invalid_argument("disk needs R, h > 0");
  // Concentric rings: ring k has 6k vertices at radius k*R/K. The factor on
  // K keeps tangential and inter-ring edges below h as well.
  const int K = std::max(1, static_cast<int>(std::ceil(1.25 * R / h)));
  if (6 * K < 8)
    throw std::invalid_argument("h too large: fewer than 8 boundary vertices");

  std::vector<Eigen::RowVector3d> pts{{0.0, 0.0, 0.0}};
  std::vector<int> ring_start{0};  // ring 0 = center vertex
  for (int k = 1; k <= K; ++k) {
    ring_start.push_back(static_cast<int>(pts.size()));
    double r = R * k / K;
    for (int j = 0; j < 6 * k; ++j) {
      double th = 2.0 * std::numbers::pi * j / (6 * k);
      pts.push_back({r * std::cos(th), r * std::sin(th), 0.0});
    }
  }
  std::vector<Eigen::RowVector3i> fcs;
  for (int k = 0; k < K; ++k) {
    const int nA = k == 0 ? 1 : 6 * k, nB = 6 * (k + 1);
    const int A = k == 0 ? 0 : ring_start[k], B = ring_start[k + 1];
    if (k == 0) {
      for (int j = 0; j < nB; ++j)
        fcs.push_back({B + j, B + (j + 1) % nB, 0});
      continue;
    }
    // Merge the two rings by angle, advancing whichever ring's next vertex
    // comes first.
    int i = 0, j = 0;
    while (i < nA || j < nB) {
      bool adv_inner =
          j >= nB ||
          (i < nA && double(i + 1) / nA <= double(j + 1) / nB);
      if (adv_inner) {
        fcs.push_back({A + i % nA, B + j % nB, A + (i + 1) % nA});
        ++i;
      } else {
        fcs.push_back({B + j % nB, B + (j + 1) % nB, A + i % nA});
        ++j;
      }
    }
  }

  Eigen::MatrixX3d P(pts.size(), 3);
  Eigen::MatrixX3i F(fcs.size(), 3);
  for (size_t i = 0; i < pts.size(); ++i) P.row(i) = pts[i];
  for (size_t i = 0; i < fcs.size(); ++i) F.row(i) = fcs[i];
  PlanarDomain dom =
      finish_domain(TriangleMesh::from_embedded(P, F), PlanarDomain::Shape::Disk);
  dom.R = R;
  return dom;
}

PlanarDomain rectangle_domain(double L, double W, double h) {
  if (L <= 0.0 || W <= 0.0 || h <= 0.0)
    throw std::invalid_argument("rectangle needs L, W, h > 0");
  if (L < W) std::swap(L, W);
  // Diagonal edges are the longest; keep grid steps <= h / sqrt(2). An even
  // vertical count puts the midline y = W/2 on the grid.
  const double step = h / std::numbers::sqrt2;
  const int nx = std::max(2, static_cast<int>(std::ceil(L / step)));
  int ny = std::max(2, static_cast<int>(std::ceil(W / step)));
  if (ny % 2) ++ny;
  if (2 * (nx + ny) < 8)
    throw std::invalid_argument("h too large: fewer than 8 boundary vertices");

  Eigen::MatrixX3d P((nx + 1) * (ny + 1), 3);
  auto vid = [ny](int i, int j) { return i * (ny + 1) + j; };
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j)
      P.row(vid(i, j)) = Eigen::RowVector3d(L * i / nx, W * j / ny, 0.0);
  Eigen::MatrixX3i F(2 * nx * ny, 3);
  int f = 0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      F.row(f++) = Eigen::RowVector3i(vid(i, j), vid(i + 1, j), vid(i + 1, j + 1));
      F.row(f++) = Eigen::RowVector3i(vid(i, j), vid(i + 1, j + 1), vid(i, j + 1));
    }
  PlanarDomain dom = finish_domain(TriangleMesh::from_embedded(P, F),
                                   PlanarDomain::Shape::Rectangle);
  dom.L = L;
  dom.W = W;
  return dom;
}

PlanarDomain external_domain(TriangleMesh mesh) {
  if (!mesh.has_positions())
    throw std::invalid_argument("external planar domain needs positions");
  return finish_domain(std::move(mesh), PlanarDomain::Shape::External);
}

DistanceField boundary_distance(const PlanarDomain& dom) {
  const auto& P = dom.mesh.positions();
  DistanceField out;
  out.values.setConstant(dom.mesh.vertex_count(),
                         std::numeric_limits<double>::infinity());
  for (const auto& loop : dom.boundary_loops)
    for (int v : loop) out.sources.push_back(v);

  auto seg_dist = [](const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                     const Eigen::Vector2d& b) {
    Eigen::Vector2d ab = b - a;
    double t = ab.squaredNorm() > 0.0
                   ? std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0)
                   : 0.0;
    return (p - (a + t * ab)).norm();
  };
  for (int v = 0; v < dom.mesh.vertex_count(); ++v) {
    Eigen::Vector2d p(P(v, 0), P(v, 1));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& loop : dom.boundary_loops) {
      const int n = static_cast<int>(loop.size());
      for (int k = 0; k < n; ++k) {
        Eigen::Vector2d a(P(loop[k], 0), P(loop[k], 1));
        Eigen::Vector2d b(P(loop[(k + 1) % n], 0), P(loop[(k + 1) % n], 1));
        best = std::min(best, seg_dist(p, a, b));
      }
    }
    out.values[v] = best;
    if (dom.mesh.is_boundary_vertex(v)) out.values[v] = 0.0;
  }
  return out;
}

SolveReport solve_torsion(const PlanarDomain& dom, double m, TorsionMode mode,
                          const ObstacleConfig& ocfg,
                          const GradientConfig& gcfg) {
  if (m <= 0.0) throw std::invalid_argument("torsion solve requires m > 0");
  if (mode == TorsionMode::Obstacle) {
    ObstacleProblem p;
    p.mesh = &dom.mesh;
    p.ops = &dom.ops;
    p.obstacle = boundary_distance(dom).values;
    p.m = m;
    p.bc = BoundaryCondition::ZeroOnBoundary;
    return solve_obstacle(p, ocfg);
  }
  GradientProblem p;
  p.mesh = &dom.mesh;
  p.ops = &dom.ops;
  p.m = m;
  p.bc = BoundaryCondition::ZeroOnBoundary;
  return solve_gradient_constrained(p, gcfg);
}

RegionLabeling medial_ground_truth(const PlanarDomain& dom, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  const int n = dom.mesh.vertex_count();
  RegionLabeling lab;
  lab.member.assign(n, 0);
  lab.definition = "ground_truth";
  lab.lambda = lambda;
  const auto& P = dom.mesh.positions();
  const double snap = 0.5 * dom.mesh.max_edge_length();
  const double tol = 1e-9;

  if (dom.shape == PlanarDomain::Shape::Disk) {
    // Medial axis of the disk is its center; lambda-membership up to R.
    if (lambda <= dom.R + tol)
      for (int v = 0; v < n; ++v)
        if (P.row(v).head<2>().norm() < tol) lab.member[v] = 1;
    return lab;
  }
  if (dom.shape != PlanarDomain::Shape::Rectangle)
    throw std::invalid_argument("no medial ground truth for external domains");

  // Rectangle [0,L] x [0,W], L >= W: central segment on y = W/2 between
  // x = W/2 and x = L - W/2, plus a diagonal branch from each corner. A
  // branch point at Euclidean distance s from its corner is a lambda-member
  // iff s >= 2 * lambda (two orthogonal boundary projections).
  const double L = dom.L, W = dom.W, mid = W / 2.0;
  for (int v = 0; v < n; ++v) {
    double x = P(v, 0), y = P(v, 1);
    bool member = false;
    if (std::abs(y - mid) <= snap && x >= mid - snap && x <= L - mid + snap)
      member = lambda <= mid + tol;
    double cx = std::min(x, L - x), cy = std::min(y, W - y);
    if (!member && std::abs(cx - cy) <= snap && cx <= mid + snap) {
      double s = std::hypot(cx, cy);
      member = lambda <= tol || s >= 2.0 * lambda - tol;
    }
    lab.member[v] = member ? 1 : 0;
  }
  return lab;
}

}  // namespace cutloc
