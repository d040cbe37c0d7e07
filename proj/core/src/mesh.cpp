#include "cutloc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>

namespace cutloc {

namespace {

double heron_area(double a, double b, double c) {
  // Kahan's numerically stable variant.
  double x = a, y = b, z = c;
  if (x < y) std::swap(x, y);
  if (x < z) std::swap(x, z);
  if (y < z) std::swap(y, z);
  double s = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  if (s <= 0.0) return 0.0;
  return 0.25 * std::sqrt(s);
}

}  // namespace

TriangleMesh TriangleMesh::from_embedded(Eigen::MatrixX3d positions,
                                         Eigen::MatrixX3i faces) {
  TriangleMesh m;
  m.vertex_count_ = static_cast<int>(positions.rows());
  m.embedded_ = true;
  m.faces_ = std::move(faces);
  m.positions_ = std::move(positions);
  const auto& P = *m.positions_;
  m.corner_lengths_.resize(m.faces_.rows(), 3);
  for (int f = 0; f < m.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      int a = m.faces_(f, (k + 1) % 3), b = m.faces_(f, (k + 2) % 3);
      if (a < 0 || b < 0 || a >= m.vertex_count_ || b >= m.vertex_count_)
        throw MeshError("face " + std::to_string(f) + " references invalid vertex");
      m.corner_lengths_(f, k) = (P.row(a) - P.row(b)).norm();
    }
  }
  m.build_topology();
  m.validate();
  m.finalize_geometry();
  return m;
}

TriangleMesh TriangleMesh::from_intrinsic(
    int vertex_count, Eigen::MatrixX3i faces,
    const std::vector<std::tuple<int, int, double>>& edge_lengths,
    std::optional<Eigen::MatrixX3d> positions) {
  TriangleMesh m;
  m.vertex_count_ = vertex_count;
  m.embedded_ = false;
  m.faces_ = std::move(faces);
  m.positions_ = std::move(positions);

  std::map<std::pair<int, int>, double> len;
  for (auto& [i, j, l] : edge_lengths) {
    if (l <= 0.0) throw MeshError("intrinsic edge length must be positive");
    len[{std::min(i, j), std::max(i, j)}] = l;
  }
  m.corner_lengths_.resize(m.faces_.rows(), 3);
  for (int f = 0; f < m.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      int a = m.faces_(f, (k + 1) % 3), b = m.faces_(f, (k + 2) % 3);
      auto it = len.find({std::min(a, b), std::max(a, b)});
      if (it == len.end())
        throw MeshError("missing intrinsic length for edge of face " +
                        std::to_string(f));
      m.corner_lengths_(f, k) = it->second;
    }
  }
  // When both representations are present they must agree.
  if (m.positions_) {
    const auto& P = *m.positions_;
    for (auto& [key, l] : len) {
      double le = (P.row(key.first) - P.row(key.second)).norm();
      if (std::abs(le - l) > 1e-12 * std::max(1.0, l))
        throw MeshError("embedded and intrinsic edge lengths disagree");
    }
  }
  m.build_topology();
  m.validate();
  m.finalize_geometry();
  return m;
}

void TriangleMesh::build_topology() {
  vertex_faces_.assign(vertex_count_, {});
  vertex_edges_.assign(vertex_count_, {});
  face_neighbors_ = Eigen::MatrixX3i::Constant(face_count(), 3, -1);
  boundary_vertex_.assign(vertex_count_, 0);

  std::map<std::pair<int, int>, int> edge_of;
  for (int f = 0; f < face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      int v = faces_(f, k);
      if (v < 0 || v >= vertex_count_)
        throw MeshError("face " + std::to_string(f) + " references invalid vertex");
      vertex_faces_[v].push_back(f);
    }
    if (faces_(f, 0) == faces_(f, 1) || faces_(f, 1) == faces_(f, 2) ||
        faces_(f, 0) == faces_(f, 2))
      throw MeshError("face " + std::to_string(f) + " has repeated vertices");
    for (int k = 0; k < 3; ++k) {
      int a = faces_(f, (k + 1) % 3), b = faces_(f, (k + 2) % 3);
      auto key = std::minmax(a, b);
      auto it = edge_of.find(key);
      if (it == edge_of.end()) {
        Edge e;
        e.i = key.first;
        e.j = key.second;
        e.length = corner_lengths_(f, k);
        e.face0 = f;
        edge_of[key] = static_cast<int>(edges_.size());
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.face1 != -1)
          throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") shared by more than two faces");
        e.face1 = f;
      }
    }
  }
  // Orientation consistency: a shared edge must be traversed in opposite
  // directions by its two faces.
  auto directed = [&](int f, int a, int b) {
    for (int k = 0; k < 3; ++k)
      if (faces_(f, k) == a && faces_(f, (k + 1) % 3) == b) return true;
    return false;
  };
  for (const Edge& e : edges_) {
    if (e.face1 == -1) continue;
    bool d0 = directed(e.face0, e.i, e.j);
    bool d1 = directed(e.face1, e.i, e.j);
    if (d0 == d1) throw MeshError("inconsistent face orientation across an edge");
  }
  for (int ei = 0; ei < static_cast<int>(edges_.size()); ++ei) {
    const Edge& e = edges_[ei];
    vertex_edges_[e.i].push_back(ei);
    vertex_edges_[e.j].push_back(ei);
    if (e.face1 == -1) {
      has_boundary_ = true;
      boundary_vertex_[e.i] = 1;
      boundary_vertex_[e.j] = 1;
    }
  }
  // Fill face neighbor table.
  for (int f = 0; f < face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      int a = faces_(f, (k + 1) % 3), b = faces_(f, (k + 2) % 3);
      auto key = std::minmax(a, b);
      const Edge& e = edges_[edge_of[key]];
      face_neighbors_(f, k) = (e.face0 == f) ? e.face1 : e.face0;
    }
  }
}

void TriangleMesh::validate() const {
  for (int f = 0; f < face_count(); ++f) {
    double a = corner_lengths_(f, 0), b = corner_lengths_(f, 1),
           c = corner_lengths_(f, 2);
    if (!(a + b > c && b + c > a && a + c > b) || heron_area(a, b, c) <= 0.0)
      throw MeshError("degenerate triangle at face " + std::to_string(f));
  }
}

void TriangleMesh::finalize_geometry() {
  face_areas_.resize(face_count());
  total_area_ = 0.0;
  for (int f = 0; f < face_count(); ++f) {
    face_areas_[f] = heron_area(corner_lengths_(f, 0), corner_lengths_(f, 1),
                                corner_lengths_(f, 2));
    total_area_ += face_areas_[f];
  }
  double sum = 0.0;
  max_edge_length_ = 0.0;
  for (const Edge& e : edges_) {
    sum += e.length;
    max_edge_length_ = std::max(max_edge_length_, e.length);
  }
  mean_edge_length_ = edges_.empty() ? 0.0 : sum / static_cast<double>(edges_.size());

  int bad_angles = 0;
  const double threshold = 170.0 * M_PI / 180.0;
  for (int f = 0; f < face_count(); ++f)
    for (int k = 0; k < 3; ++k)
      if (corner_angle(f, k) > threshold) ++bad_angles;
  if (bad_angles > 0) {
    std::ostringstream os;
    os << "mesh quality: " << bad_angles << " corner angles exceed 170 degrees";
    warnings_.push_back(os.str());
  }
}

const Eigen::MatrixX3d& TriangleMesh::positions() const {
  if (!positions_) throw MeshError("mesh has no vertex positions");
  return *positions_;
}

void TriangleMesh::set_output_coords(Eigen::MatrixX3d coords) {
  if (coords.rows() != vertex_count_)
    throw MeshError("output coordinate count does not match vertex count");
  if (embedded_) throw MeshError("embedded mesh already has positions");
  positions_ = std::move(coords);
}

int TriangleMesh::edge_index(int i, int j) const {
  for (int ei : vertex_edges_[i]) {
    const Edge& e = edges_[ei];
    if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) return ei;
  }
  return -1;
}

void TriangleMesh::set_basepoint(int b) {
  if (b < 0 || b >= vertex_count_) throw MeshError("basepoint out of range");
  basepoint_ = b;
}

double TriangleMesh::corner_angle(int f, int k) const {
  double a = corner_lengths_(f, k);            // opposite the corner
  double b = corner_lengths_(f, (k + 1) % 3);
  double c = corner_lengths_(f, (k + 2) % 3);
  double cosv = (b * b + c * c - a * a) / (2.0 * b * c);
  cosv = std::clamp(cosv, -1.0, 1.0);
  return std::acos(cosv);
}

bool TriangleMesh::is_connected() const {
  if (vertex_count_ == 0) return true;
  std::vector<char> seen(vertex_count_, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int ei : vertex_edges_[v]) {
      const Edge& e = edges_[ei];
      int w = (e.i == v) ? e.j : e.i;
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        q.push(w);
      }
    }
  }
  return count == vertex_count_;
}

}  // namespace cutloc
