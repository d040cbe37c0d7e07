#include "cutloc/semiconcavity.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <unordered_map>

namespace cutloc {

Vec3 GeodesicSample::point_at(double t) const {
  switch (kind) {
    case Kind::Sphere:
      return origin * std::cos(t) + dir * std::sin(t);
    case Kind::Torus: {
      Vec3 p = origin + t * dir;
      p.x() -= std::floor(p.x());
      p.y() -= std::floor(p.y());
      p.z() = 0.0;
      return p;
    }
    case Kind::Planar:
    default:
      return origin + t * dir;
  }
}

namespace {

double distance_to_basepoint(const GeodesicSample& g, double t) {
  Vec3 p = g.point_at(t);
  if (g.kind == GeodesicSample::Kind::Sphere)
    return std::acos(std::clamp(p.z(), -1.0, 1.0));  // basepoint (0,0,1)
  Eigen::Vector2d w =
      torus_displacement({p.x(), p.y()}, Eigen::Vector2d::Zero());
  return w.norm();
}

// Longest maximal sub-run of [0, len] where valid(t) holds, endpoints refined
// by bisection. Returns false if no run of length >= min_len exists.
bool longest_valid_run(const std::function<bool(double)>& valid, double len,
                       double min_len, double* a, double* b) {
  constexpr int kScan = 1024;
  double best_a = 0.0, best_b = -1.0;
  int run_start = -1;
  for (int k = 0; k <= kScan; ++k) {
    bool ok = valid(len * k / kScan);
    if (ok && run_start < 0) run_start = k;
    if ((!ok || k == kScan) && run_start >= 0) {
      int run_end = ok ? k : k - 1;
      double ra = len * run_start / kScan, rb = len * run_end / kScan;
      if (rb - ra > best_b - best_a) {
        best_a = ra;
        best_b = rb;
      }
      run_start = -1;
    }
  }
  if (best_b - best_a < min_len) return false;
  auto refine = [&](double inside, double outside) {
    for (int i = 0; i < 40; ++i) {
      double mid = 0.5 * (inside + outside);
      (valid(mid) ? inside : outside) = mid;
    }
    return inside;
  };
  double step = len / kScan;
  if (best_a > 0.0) best_a = refine(best_a, best_a - step);
  if (best_b < len) best_b = refine(best_b, best_b + step);
  *a = best_a;
  *b = best_b;
  return best_b - best_a >= min_len;
}

}  // namespace

std::vector<GeodesicSample> sample_geodesics(GeodesicSample::Kind kind,
                                             int count, double max_length,
                                             double rho, unsigned seed,
                                             double planar_extent) {
  if (count <= 0 || max_length <= 0.0)
    throw std::invalid_argument("sample_geodesics needs count, max_length > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;

  std::vector<GeodesicSample> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count && attempts < 100 * count) {
    ++attempts;
    GeodesicSample g;
    g.kind = kind;
    switch (kind) {
      case GeodesicSample::Kind::Sphere: {
        Vec3 p(gauss(rng), gauss(rng), gauss(rng));
        if (p.norm() < 1e-6) continue;
        p.normalize();
        Vec3 t(gauss(rng), gauss(rng), gauss(rng));
        t -= t.dot(p) * p;
        if (t.norm() < 1e-6) continue;
        g.origin = p;
        g.dir = t.normalized();
        break;
      }
      case GeodesicSample::Kind::Torus: {
        g.origin = Vec3(unif(rng), unif(rng), 0.0);
        double th = two_pi * unif(rng);
        g.dir = Vec3(std::cos(th), std::sin(th), 0.0);
        break;
      }
      case GeodesicSample::Kind::Planar: {
        g.origin = Vec3(planar_extent * (2.0 * unif(rng) - 1.0),
                        planar_extent * (2.0 * unif(rng) - 1.0), 0.0);
        double th = two_pi * unif(rng);
        g.dir = Vec3(std::cos(th), std::sin(th), 0.0);
        break;
      }
    }
    std::function<bool(double)> valid;
    if (kind == GeodesicSample::Kind::Planar) {
      valid = [&](double t) {
        Vec3 p = g.point_at(t);
        return std::abs(p.x()) <= planar_extent && std::abs(p.y()) <= planar_extent;
      };
    } else {
      valid = [&](double t) { return distance_to_basepoint(g, t) > rho; };
    }
    double min_len = std::min(0.25 * max_length, 0.2);
    if (!longest_valid_run(valid, max_length, min_len, &g.a, &g.b)) continue;
    out.push_back(g);
  }
  if (static_cast<int>(out.size()) < count)
    throw std::runtime_error("could not sample enough geodesics avoiding the basepoint ball");
  return out;
}

SemiconcavityReport estimate_semiconcavity(
    const FieldEvaluator& u, const std::vector<GeodesicSample>& samples,
    double min_chord, int chord_nodes) {
  if (samples.empty()) throw std::invalid_argument("empty geodesic sample set");
  if (chord_nodes < 3) throw std::invalid_argument("chord_nodes must be >= 3");
  static const std::vector<double> kLambdaGrid = {0.1, 0.2, 0.3, 0.4, 0.5,
                                                  0.6, 0.7, 0.8, 0.9};
  SemiconcavityReport rep;
  for (int s = 0; s < static_cast<int>(samples.size()); ++s) {
    const GeodesicSample& g = samples[s];
    std::vector<double> t(chord_nodes), ut(chord_nodes);
    for (int k = 0; k < chord_nodes; ++k) {
      t[k] = g.a + (g.b - g.a) * k / (chord_nodes - 1);
      ut[k] = u(g.point_at(t[k]));
    }
    for (int i = 0; i < chord_nodes; ++i)
      for (int j = i + 1; j < chord_nodes; ++j) {
        double len = t[j] - t[i];
        if (len < min_chord || len <= 0.0) continue;
        for (double lam : kLambdaGrid) {
          double tm = (1.0 - lam) * t[i] + lam * t[j];
          double excess = (1.0 - lam) * ut[i] + lam * ut[j] - u(g.point_at(tm));
          double q = excess / (lam * (1.0 - lam) * len * len);
          ++rep.chords_evaluated;
          if (q > rep.C_hat) {
            rep.C_hat = q;
            rep.worst_sample = s;
            rep.worst_a = t[i];
            rep.worst_b = t[j];
            rep.worst_lambda = lam;
          }
        }
      }
  }
  // Refine lambda on the worst chord around the grid maximum.
  if (rep.worst_sample >= 0) {
    const GeodesicSample& g = samples[rep.worst_sample];
    double ta = rep.worst_a, tb = rep.worst_b, len = tb - ta;
    double ua = u(g.point_at(ta)), ub = u(g.point_at(tb));
    auto quot = [&](double lam) {
      double tm = (1.0 - lam) * ta + lam * tb;
      return ((1.0 - lam) * ua + lam * ub - u(g.point_at(tm))) /
             (lam * (1.0 - lam) * len * len);
    };
    double lo = std::max(0.01, rep.worst_lambda - 0.1);
    double hi = std::min(0.99, rep.worst_lambda + 0.1);
    for (int i = 0; i < 60 && hi - lo > 1e-6; ++i) {
      double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (quot(m1) < quot(m2))
        lo = m1;
      else
        hi = m2;
    }
    double lam = 0.5 * (lo + hi);
    double q = quot(lam);
    if (q > rep.C_hat) {
      rep.C_hat = q;
      rep.worst_lambda = lam;
    }
  }
  return rep;
}

namespace {

// Uniform spatial hash over mesh vertices for nearest-vertex queries.
class VertexGrid {
 public:
  VertexGrid(const Eigen::MatrixX3d& pts, double cell) : pts_(pts), cell_(cell) {
    for (int v = 0; v < pts.rows(); ++v) cells_[key(pts.row(v))].push_back(v);
  }

  int nearest(const Vec3& p) const {
    for (int ring = 1; ring <= 64; ++ring) {
      int best = -1;
      double best_d2 = std::numeric_limits<double>::infinity();
      Eigen::Vector3i c = coords(p);
      for (int dx = -ring; dx <= ring; ++dx)
        for (int dy = -ring; dy <= ring; ++dy)
          for (int dz = -ring; dz <= ring; ++dz) {
            auto it = cells_.find(pack(c.x() + dx, c.y() + dy, c.z() + dz));
            if (it == cells_.end()) continue;
            for (int v : it->second) {
              double d2 = (pts_.row(v).transpose() - p).squaredNorm();
              if (d2 < best_d2) {
                best_d2 = d2;
                best = v;
              }
            }
          }
      // A hit within (ring-1) cells of the query cannot be beaten by points
      // in farther rings.
      if (best >= 0 && std::sqrt(best_d2) <= cell_ * (ring - 1)) return best;
      if (best >= 0 && ring == 64) return best;
    }
    return -1;
  }

 private:
  Eigen::Vector3i coords(const Vec3& p) const {
    return {static_cast<int>(std::floor(p.x() / cell_)),
            static_cast<int>(std::floor(p.y() / cell_)),
            static_cast<int>(std::floor(p.z() / cell_))};
  }
  static long long pack(int x, int y, int z) {
    auto w = [](int v) { return static_cast<long long>(v + (1 << 20)); };
    return (w(x) << 42) | (w(y) << 21) | w(z);
  }
  long long key(const Eigen::RowVector3d& p) const {
    Eigen::Vector3i c = coords(p.transpose());
    return pack(c.x(), c.y(), c.z());
  }

  const Eigen::MatrixX3d& pts_;
  double cell_;
  std::unordered_map<long long, std::vector<int>> cells_;
};

// Barycentric coordinates of the in-plane projection of p onto the triangle.
Eigen::Vector3d barycentric(const Vec3& p0, const Vec3& p1, const Vec3& p2,
                            const Vec3& p) {
  Vec3 e1 = p1 - p0, e2 = p2 - p0, d = p - p0;
  double a = e1.dot(e1), b = e1.dot(e2), c = e2.dot(e2);
  double det = a * c - b * b;
  if (det <= 0.0) return {1.0, 0.0, 0.0};
  double l1 = (c * e1.dot(d) - b * e2.dot(d)) / det;
  double l2 = (a * e2.dot(d) - b * e1.dot(d)) / det;
  return {1.0 - l1 - l2, l1, l2};
}

}  // namespace

FieldEvaluator mesh_field_evaluator(const TriangleMesh& mesh, VertexField u) {
  if (!mesh.has_positions())
    throw std::invalid_argument("mesh field evaluation needs vertex positions");
  auto pts = std::make_shared<Eigen::MatrixX3d>(mesh.positions());
  auto grid = std::make_shared<VertexGrid>(
      *pts, std::max(2.0 * mesh.max_edge_length(), 1e-8));
  auto faces = mesh.faces();
  std::vector<std::vector<int>> stars(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) stars[v] = mesh.vertex_faces(v);
  return [pts, grid, faces, stars, u = std::move(u)](const Vec3& p) {
    int v = grid->nearest(p);
    if (v < 0) throw std::runtime_error("nearest-vertex lookup failed");
    double best_inside = -std::numeric_limits<double>::infinity();
    double value = u[v];
    for (int f : stars[v]) {
      int i0 = faces(f, 0), i1 = faces(f, 1), i2 = faces(f, 2);
      Eigen::Vector3d l = barycentric(pts->row(i0), pts->row(i1), pts->row(i2), p);
      double inside = l.minCoeff();
      if (inside > best_inside) {
        best_inside = inside;
        Eigen::Vector3d lc = l.cwiseMax(0.0);
        lc /= lc.sum();
        value = lc[0] * u[i0] + lc[1] * u[i1] + lc[2] * u[i2];
      }
    }
    return value;
  };
}

FieldEvaluator torus_field_evaluator(const TriangleMesh& mesh, VertexField u) {
  const int nv = mesh.vertex_count();
  const int n = static_cast<int>(std::lround(std::sqrt(double(nv))));
  if (n * n != nv)
    throw std::invalid_argument("torus field evaluation needs an n-by-n grid mesh");
  return [n, u = std::move(u)](const Vec3& p) {
    double x = p.x() - std::floor(p.x()), y = p.y() - std::floor(p.y());
    double gx = x * n, gy = y * n;
    int i = std::min(static_cast<int>(gx), n - 1);
    int j = std::min(static_cast<int>(gy), n - 1);
    double fx = gx - i, fy = gy - j;
    auto vid = [n](int a, int b) { return ((a % n + n) % n) * n + ((b % n + n) % n); };
    double u00 = u[vid(i, j)], u10 = u[vid(i + 1, j)];
    double u01 = u[vid(i, j + 1)], u11 = u[vid(i + 1, j + 1)];
    if (fx >= fy)  // triangle (v00, v10, v11)
      return (1.0 - fx) * u00 + (fx - fy) * u10 + fy * u11;
    return (1.0 - fy) * u00 + fx * u11 + (fy - fx) * u01;
  };
}

}  // namespace cutloc
