#include "cutloc/operators.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace cutloc {

namespace {

// 2D layout of face f in its local frame: corner 0 at the origin, corner 1 on
// the positive x-axis. Valid for intrinsic and embedded meshes alike.
void face_layout(const TriangleMesh& mesh, int f, Eigen::Vector2d p[3]) {
  double l0 = mesh.opposite_length(f, 0);  // |v1 v2|
  double l1 = mesh.opposite_length(f, 1);  // |v0 v2|
  double l2 = mesh.opposite_length(f, 2);  // |v0 v1|
  p[0] = {0.0, 0.0};
  p[1] = {l2, 0.0};
  double x = (l2 * l2 + l1 * l1 - l0 * l0) / (2.0 * l2);
  double y2 = l1 * l1 - x * x;
  p[2] = {x, std::sqrt(std::max(0.0, y2))};
}

// Shape-function gradients on face f: grad phi_k = perp(p_{k+2} - p_{k+1}) / (2A)
// with perp the CCW rotation, so that the interpolant gradient is
// sum_k u_k grad phi_k.
void shape_gradients(const TriangleMesh& mesh, int f, Eigen::Vector2d g[3]) {
  Eigen::Vector2d p[3];
  face_layout(mesh, f, p);
  double area2 = 2.0 * mesh.face_area(f);
  for (int k = 0; k < 3; ++k) {
    Eigen::Vector2d e = p[(k + 2) % 3] - p[(k + 1) % 3];
    g[k] = Eigen::Vector2d(-e.y(), e.x()) / area2;
  }
}

}  // namespace

Operators build_operators(const TriangleMesh& mesh) {
  const int n = mesh.vertex_count();
  Operators ops;
  ops.lumped_area = Eigen::VectorXd::Zero(n);
  ops.total_area = mesh.total_area();

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(12 * mesh.face_count());
  for (int f = 0; f < mesh.face_count(); ++f) {
    double area = mesh.face_area(f);
    if (area <= 0.0)
      throw MeshError("degenerate triangle at face " + std::to_string(f));
    // Cotangent weights from edge lengths: for the edge opposite corner k,
    // cot(angle_k) = (b^2 + c^2 - a^2) / (4 A).
    for (int k = 0; k < 3; ++k) {
      double a = mesh.opposite_length(f, k);
      double b = mesh.opposite_length(f, (k + 1) % 3);
      double c = mesh.opposite_length(f, (k + 2) % 3);
      double half_cot = (b * b + c * c - a * a) / (8.0 * area);
      int vi = mesh.faces()(f, (k + 1) % 3);
      int vj = mesh.faces()(f, (k + 2) % 3);
      // Energy contribution half_cot * (u_i - u_j)^2.
      trips.emplace_back(vi, vi, half_cot);
      trips.emplace_back(vj, vj, half_cot);
      trips.emplace_back(vi, vj, -half_cot);
      trips.emplace_back(vj, vi, -half_cot);
    }
    double third = area / 3.0;
    for (int k = 0; k < 3; ++k) ops.lumped_area[mesh.faces()(f, k)] += third;
  }
  ops.stiffness.resize(n, n);
  ops.stiffness.setFromTriplets(trips.begin(), trips.end());
  ops.stiffness.makeCompressed();
  return ops;
}

Eigen::Matrix2Xd face_gradients_local(const TriangleMesh& mesh,
                                      const VertexField& u) {
  if (u.size() != mesh.vertex_count())
    throw MeshError("field size does not match vertex count");
  Eigen::Matrix2Xd grads(2, mesh.face_count());
  for (int f = 0; f < mesh.face_count(); ++f) {
    Eigen::Vector2d g[3];
    shape_gradients(mesh, f, g);
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    for (int k = 0; k < 3; ++k) v += u[mesh.faces()(f, k)] * g[k];
    grads.col(f) = v;
  }
  return grads;
}

Eigen::Matrix3Xd face_gradients(const TriangleMesh& mesh, const VertexField& u) {
  if (!mesh.is_embedded())
    throw MeshError("world-space gradients require an embedded mesh");
  Eigen::Matrix2Xd local = face_gradients_local(mesh, u);
  const auto& P = mesh.positions();
  Eigen::Matrix3Xd world(3, mesh.face_count());
  for (int f = 0; f < mesh.face_count(); ++f) {
    Vec3 p0 = P.row(mesh.faces()(f, 0));
    Vec3 p1 = P.row(mesh.faces()(f, 1));
    Vec3 p2 = P.row(mesh.faces()(f, 2));
    Vec3 e1 = (p1 - p0).normalized();
    Vec3 n = (p1 - p0).cross(p2 - p0);
    Vec3 e2 = n.cross(p1 - p0).normalized();
    world.col(f) = e1 * local(0, f) + e2 * local(1, f);
  }
  return world;
}

Eigen::VectorXd face_gradient_norms(const TriangleMesh& mesh,
                                    const VertexField& u) {
  Eigen::Matrix2Xd local = face_gradients_local(mesh, u);
  return local.colwise().norm();
}

VertexField vertex_gradient_norm(const TriangleMesh& mesh, const VertexField& u) {
  Eigen::VectorXd norms = face_gradient_norms(mesh, u);
  VertexField out = VertexField::Zero(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const auto& incident = mesh.vertex_faces(v);
    if (incident.empty())
      throw MeshError("isolated vertex " + std::to_string(v));
    double wsum = 0.0, acc = 0.0;
    for (int f : incident) {
      acc += mesh.face_area(f) * norms[f];
      wsum += mesh.face_area(f);
    }
    out[v] = acc / wsum;
  }
  return out;
}

Eigen::SparseMatrix<double> gradient_operator(const TriangleMesh& mesh) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(6 * mesh.face_count());
  for (int f = 0; f < mesh.face_count(); ++f) {
    Eigen::Vector2d g[3];
    shape_gradients(mesh, f, g);
    for (int k = 0; k < 3; ++k) {
      int v = mesh.faces()(f, k);
      trips.emplace_back(2 * f, v, g[k].x());
      trips.emplace_back(2 * f + 1, v, g[k].y());
    }
  }
  Eigen::SparseMatrix<double> G(2 * mesh.face_count(), mesh.vertex_count());
  G.setFromTriplets(trips.begin(), trips.end());
  G.makeCompressed();
  return G;
}

CurvatureInfo curvature_info(const TriangleMesh& mesh) {
  const int n = mesh.vertex_count();
  CurvatureInfo info;
  Eigen::VectorXd angle_sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd area = Eigen::VectorXd::Zero(n);
  for (int f = 0; f < mesh.face_count(); ++f) {
    double third = mesh.face_area(f) / 3.0;
    for (int k = 0; k < 3; ++k) {
      int v = mesh.faces()(f, k);
      angle_sum[v] += mesh.corner_angle(f, k);
      area[v] += third;
    }
  }
  info.angle_defect.resize(n);
  info.gauss_per_vertex.resize(n);
  for (int v = 0; v < n; ++v) {
    double flat = mesh.is_boundary_vertex(v) ? M_PI : 2.0 * M_PI;
    info.angle_defect[v] = flat - angle_sum[v];
    info.gauss_per_vertex[v] =
        area[v] > 0.0 ? info.angle_defect[v] / area[v]
                      : std::numeric_limits<double>::quiet_NaN();
  }
  info.total_defect = info.angle_defect.sum();
  info.gauss_bonnet_checked = !mesh.has_boundary();
  info.ricci_lower_bound = std::max(0.0, -info.gauss_per_vertex.minCoeff());

  // Diameter estimate by a double Dijkstra sweep over the edge graph.
  auto dijkstra = [&mesh](int src, int& farthest) {
    std::vector<double> dist(mesh.vertex_count(),
                             std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0.0;
    pq.push({0.0, src});
    double best = 0.0;
    farthest = src;
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      if (d > best) {
        best = d;
        farthest = v;
      }
      for (int ei : mesh.vertex_edges(v)) {
        const Edge& e = mesh.edges()[ei];
        int w = (e.i == v) ? e.j : e.i;
        if (dist[v] + e.length < dist[w]) {
          dist[w] = dist[v] + e.length;
          pq.push({dist[w], w});
        }
      }
    }
    return best;
  };
  int far = 0;
  dijkstra(0, far);
  int far2 = 0;
  info.diameter_estimate = std::max(dijkstra(far, far2), mesh.max_edge_length());
  return info;
}

double sufficient_m(double K, double diam, int n) {
  if (K < 0.0 || diam <= 0.0 || n < 2)
    throw std::invalid_argument("sufficient_m requires K >= 0, diam > 0, n >= 2");
  double nd = static_cast<double>(n);
  double a = std::sqrt(nd * K * (1.0 + K * diam * diam));
  double b = nd * K * diam;
  return 0.5 * std::max(a, b);
}

}  // namespace cutloc
