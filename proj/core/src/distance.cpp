#include "cutloc/distance.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace cutloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Triangle update at vertex C given accepted values at A and B.
// Edge lengths: a = |BC|, b = |AC|, c = |AB|. Returns the candidate distance
// or +inf when the characteristic does not pass through the triangle
// (obtuse / inconsistent case); the caller then uses edge fallbacks.
double triangle_update(double dA, double dB, double a, double b, double c) {
  if (!(dA < kInf && dB < kInf)) return kInf;
  double u = dB - dA;
  if (u < 0.0) return triangle_update(dB, dA, b, a, c);
  if (u > c) return kInf;  // front steeper than 1-Lipschitz along AB
  // Unfold: A=(0,0), B=(c,0), C=(cx, cy).
  double cx = (c * c + b * b - a * a) / (2.0 * c);
  double cy2 = b * b - cx * cx;
  if (cy2 <= 0.0) return kInf;
  double cy = std::sqrt(cy2);
  // Virtual source S on the half-plane y <= 0 with |SA| = dA, |SB| = dB;
  // the candidate is |SC|.
  double sx = (dA * dA - dB * dB + c * c) / (2.0 * c);
  double sy2 = dA * dA - sx * sx;
  if (sy2 < 0.0) return kInf;
  double sy = -std::sqrt(sy2);
  // The update is valid only if C sees the source through the triangle: the
  // segment from S to C must cross the edge AB strictly between A and B.
  if (std::abs(cy - sy) < 1e-300) return kInf;
  double t = (0.0 - sy) / (cy - sy);
  double ix = sx + t * (cx - sx);
  if (ix <= 0.0 || ix >= c) return kInf;
  double dx = cx - sx, dy = cy - sy;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

DistanceField fast_march(const TriangleMesh& mesh, const std::vector<int>& sources) {
  if (sources.empty()) throw MeshError("fast_march requires a nonempty source set");
  const int n = mesh.vertex_count();
  DistanceField out;
  out.sources = sources;
  out.values = VertexField::Constant(n, kInf);
  std::vector<char> accepted(n, 0);

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (int s : sources) {
    if (s < 0 || s >= n) throw MeshError("source vertex out of range");
    out.values[s] = 0.0;
    pq.push({0.0, s});
  }

  auto relax = [&](int v, double cand) {
    if (cand < out.values[v]) {
      out.values[v] = cand;
      pq.push({cand, v});
    }
  };

  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (accepted[v] || d > out.values[v]) continue;
    accepted[v] = 1;
    // Update all vertices opposite to v in incident faces, and edge neighbors.
    for (int f : mesh.vertex_faces(v)) {
      int kv = -1;
      for (int k = 0; k < 3; ++k)
        if (mesh.faces()(f, k) == v) kv = k;
      for (int k = 0; k < 3; ++k) {
        int w = mesh.faces()(f, k);
        if (w == v || accepted[w]) continue;
        // Edge fallback (Dijkstra step). The edge v-w is opposite the third
        // corner of f.
        int third = 3 - k - kv;
        double evw = mesh.opposite_length(f, third);
        relax(w, out.values[v] + evw);
        // Triangle update with the third vertex if it is accepted.
        // Corners: w at k, v at kv, t at third, so opposite_length(f, kv) is
        // |w t| and opposite_length(f, k) is |v t|.
        int t = mesh.faces()(f, third);
        if (accepted[t]) {
          double len_wt = mesh.opposite_length(f, kv);
          double len_vt = mesh.opposite_length(f, k);
          // A=v, B=t, C=w.
          double cand = triangle_update(out.values[v], out.values[t], len_wt,
                                        evw, len_vt);
          if (cand == kInf) ++out.obtuse_fallbacks;
          relax(w, std::min(cand, out.values[t] + len_wt));
        }
      }
    }
  }
  for (int v = 0; v < n; ++v)
    if (out.values[v] == kInf) ++out.unreachable_count;
  return out;
}

double analytic_distance(Surface surface, const Vec3& base, const Vec3& query) {
  switch (surface) {
    case Surface::UnitSphere: {
      double c = base.normalized().dot(query.normalized());
      return std::acos(std::clamp(c, -1.0, 1.0));
    }
    case Surface::FlatUnitTorus: {
      Eigen::Vector2d d = torus_displacement({base.x(), base.y()},
                                             {query.x(), query.y()});
      return d.norm();
    }
  }
  throw std::invalid_argument("unknown surface");
}

}  // namespace cutloc
