#include "cutloc/surfaces.hpp"

#include <cmath>
#include <map>

namespace cutloc {

namespace {

// Icosahedron oriented with two vertices on the z-axis.
void base_icosahedron(std::vector<Vec3>& verts, std::vector<Eigen::Vector3i>& tris) {
  verts.clear();
  tris.clear();
  verts.push_back({0, 0, 1});   // north
  verts.push_back({0, 0, -1});  // south
  const double z = 1.0 / std::sqrt(5.0);
  const double r = 2.0 / std::sqrt(5.0);
  for (int k = 0; k < 5; ++k) {  // upper ring
    double a = 2.0 * M_PI * k / 5.0;
    verts.push_back({r * std::cos(a), r * std::sin(a), z});
  }
  for (int k = 0; k < 5; ++k) {  // lower ring, offset by 36 degrees
    double a = 2.0 * M_PI * (k + 0.5) / 5.0;
    verts.push_back({r * std::cos(a), r * std::sin(a), -z});
  }
  auto U = [](int k) { return 2 + (k % 5); };
  auto L = [](int k) { return 7 + (k % 5); };
  for (int k = 0; k < 5; ++k) {
    tris.push_back({0, U(k), U(k + 1)});          // north cap
    tris.push_back({U(k), L(k), U(k + 1)});       // upper band
    tris.push_back({U(k + 1), L(k), L(k + 1)});   // lower band
    tris.push_back({1, L(k + 1), L(k)});          // south cap
  }
}

}  // namespace

TriangleMesh icosphere(int subdivisions) {
  std::vector<Vec3> verts;
  std::vector<Eigen::Vector3i> tris;
  base_icosahedron(verts, tris);

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (verts[a] + verts[b]).normalized();
      int idx = static_cast<int>(verts.size());
      verts.push_back(m);
      midpoint[key] = idx;
      return idx;
    };
    std::vector<Eigen::Vector3i> next;
    next.reserve(tris.size() * 4);
    for (const auto& t : tris) {
      int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris.swap(next);
  }

  Eigen::MatrixX3d P(verts.size(), 3);
  for (size_t i = 0; i < verts.size(); ++i) P.row(i) = verts[i];
  Eigen::MatrixX3i F(tris.size(), 3);
  for (size_t i = 0; i < tris.size(); ++i) F.row(i) = tris[i];
  TriangleMesh m = TriangleMesh::from_embedded(std::move(P), std::move(F));
  m.set_basepoint(0);
  return m;
}

TriangleMesh flat_torus_grid(int n) {
  if (n < 3) throw MeshError("flat torus grid needs n >= 3");
  const double h = 1.0 / n;
  auto vid = [n](int i, int j) { return ((i % n + n) % n) * n + ((j % n + n) % n); };

  Eigen::MatrixX3i F(2 * n * n, 3);
  std::vector<std::tuple<int, int, double>> lengths;
  lengths.reserve(3 * n * n);
  int fi = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1),
          v11 = vid(i + 1, j + 1);
      F.row(fi++) << v00, v10, v11;
      F.row(fi++) << v00, v11, v01;
      lengths.emplace_back(v00, v10, h);
      lengths.emplace_back(v00, v01, h);
      lengths.emplace_back(v00, v11, h * std::sqrt(2.0));
    }
  }
  Eigen::MatrixX3d P(n * n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) P.row(vid(i, j)) << i * h, j * h, 0.0;

  TriangleMesh m =
      TriangleMesh::from_intrinsic(n * n, std::move(F), lengths, std::nullopt);
  m.set_output_coords(std::move(P));
  m.set_basepoint(0);
  return m;
}

Eigen::Vector2d torus_displacement(const Eigen::Vector2d& a,
                                   const Eigen::Vector2d& b) {
  Eigen::Vector2d d = b - a;
  for (int k = 0; k < 2; ++k) {
    d[k] -= std::round(d[k]);
  }
  return d;
}

}  // namespace cutloc
