#include "cutloc/sets.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cutloc {

int RegionLabeling::count() const {
  int c = 0;
  for (char b : member) c += b != 0;
  return c;
}

std::vector<int> RegionLabeling::indices() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(member.size()); ++i)
    if (member[i]) out.push_back(i);
  return out;
}

RegionLabeling elastic_set(const TriangleMesh& mesh, const VertexField& u,
                           const VertexField& d, ElasticMode mode, double eps) {
  const int n = mesh.vertex_count();
  RegionLabeling lab;
  lab.member.assign(n, 0);
  lab.threshold = eps;
  if (mode == ElasticMode::ContactGap) {
    lab.definition = "contact_gap";
    for (int i = 0; i < n; ++i) lab.member[i] = d[i] - u[i] > eps ? 1 : 0;
  } else {
    lab.definition = "gradient_threshold";
    VertexField g = vertex_gradient_norm(mesh, u);
    for (int i = 0; i < n; ++i) lab.member[i] = g[i] < 1.0 - eps ? 1 : 0;
  }
  return lab;
}

RegionLabeling lambda_elastic_set(const TriangleMesh& mesh,
                                  const VertexField& u, double lambda,
                                  double eps_g) {
  if (lambda <= 0.0)
    throw std::invalid_argument(
        "lambda must be positive; use elastic_set for the lambda = 0 case");
  const int n = mesh.vertex_count();
  VertexField g = vertex_gradient_norm(mesh, u);
  RegionLabeling lab;
  lab.member.assign(n, 0);
  lab.definition = "lambda_set";
  lab.lambda = lambda;
  lab.threshold = eps_g;
  for (int i = 0; i < n; ++i) {
    if (u[i] <= lambda * (1.0 + 1e-9)) continue;
    double bound = 1.0 - lambda * lambda / (u[i] * u[i]) + eps_g;
    lab.member[i] = g[i] * g[i] <= bound ? 1 : 0;
  }
  return lab;
}

double gen_grad_from_directions(const std::vector<Eigen::Vector2d>& dirs) {
  if (dirs.empty()) throw std::invalid_argument("empty direction set");
  for (const auto& v : dirs)
    if (std::abs(v.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("direction set contains a non-unit vector");

  auto value = [&](double theta) {
    Eigen::Vector2d v(std::cos(theta), std::sin(theta));
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& d : dirs) worst = std::min(worst, -d.dot(v));
    return worst;
  };

  constexpr int kGrid = 4096;
  const double two_pi = 2.0 * std::numbers::pi;
  double best = -std::numeric_limits<double>::infinity();
  int best_k = 0;
  for (int k = 0; k < kGrid; ++k) {
    double f = value(two_pi * k / kGrid);
    if (f > best) {
      best = f;
      best_k = k;
    }
  }
  double lo = two_pi * (best_k - 1) / kGrid;
  double hi = two_pi * (best_k + 1) / kGrid;
  while (hi - lo > 1e-10) {
    double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (value(m1) < value(m2))
      lo = m1;
    else
      hi = m2;
  }
  return std::max(0.0, value(0.5 * (lo + hi)));
}

namespace {

// Initial velocities at p of the minimizing geodesics from p to the torus
// origin (unit square coordinates, wrap-around metric). Ties produce several
// directions.
std::vector<Eigen::Vector2d> torus_geodesic_directions(Eigen::Vector2d p) {
  Eigen::Vector2d d = torus_displacement(p, Eigen::Vector2d::Zero());
  std::vector<double> xs{d.x()}, ys{d.y()};
  if (std::abs(std::abs(d.x()) - 0.5) < 1e-12) xs = {0.5, -0.5};
  if (std::abs(std::abs(d.y()) - 0.5) < 1e-12) ys = {0.5, -0.5};
  std::vector<Eigen::Vector2d> dirs;
  for (double x : xs)
    for (double y : ys) {
      Eigen::Vector2d v(x, y);
      if (v.norm() > 0.0) dirs.push_back(v.normalized());
    }
  return dirs;
}

}  // namespace

RegionLabeling ground_truth_cut(Surface surface, const TriangleMesh& mesh,
                                double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
  const int n = mesh.vertex_count();
  RegionLabeling lab;
  lab.member.assign(n, 0);
  lab.definition = "ground_truth";
  lab.lambda = lambda;

  if (surface == Surface::UnitSphere) {
    // Cut locus of the north pole is the south pole.
    const double d = std::numbers::pi;
    bool in_lambda = lambda * lambda <= d * d * (1.0 + 1e-12);
    for (int v = 0; v < n; ++v) {
      Vec3 p = mesh.positions().row(v);
      if ((p - Vec3(0, 0, -1)).norm() < 1e-9) lab.member[v] = in_lambda ? 1 : 0;
    }
    return lab;
  }

  // Flat torus: cut locus of the origin is the cross {x = 1/2} U {y = 1/2}.
  for (int v = 0; v < n; ++v) {
    Eigen::Vector2d p = torus_coords(mesh, v);
    Eigen::Vector2d w = torus_displacement(Eigen::Vector2d::Zero(), p);
    bool on_cut = std::abs(std::abs(w.x()) - 0.5) < 1e-9 ||
                  std::abs(std::abs(w.y()) - 0.5) < 1e-9;
    if (!on_cut) continue;
    if (lambda == 0.0) {
      lab.member[v] = 1;
      continue;
    }
    double d = w.norm();
    double g = gen_grad_from_directions(torus_geodesic_directions(p));
    lab.member[v] =
        g * g <= 1.0 - lambda * lambda / (d * d) + 1e-9 ? 1 : 0;
  }
  return lab;
}

HausdorffReport hausdorff(const TriangleMesh& mesh, const RegionLabeling& A,
                          const RegionLabeling& B) {
  std::vector<int> ia, ib;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (A.member[v]) ia.push_back(v);
    if (B.member[v]) ib.push_back(v);
  }
  HausdorffReport rep;
  rep.A_empty = ia.empty();
  rep.B_empty = ib.empty();
  if (ia.empty() && ib.empty())
    throw std::invalid_argument("hausdorff of two empty sets");

  const double inf = std::numeric_limits<double>::infinity();
  auto one_sided = [&](const std::vector<int>& from,
                       const std::vector<int>& to) {
    if (from.empty()) return 0.0;  // sup over the empty set
    if (to.empty()) return inf;
    DistanceField dist = multi_source_distance(mesh, to);
    double sup = 0.0;
    for (int v : from) sup = std::max(sup, dist.values[v]);
    return sup;
  };
  rep.sup_A_to_B = one_sided(ia, ib);
  rep.sup_B_to_A = one_sided(ib, ia);
  rep.symmetric = (ia.empty() || ib.empty())
                      ? std::numeric_limits<double>::quiet_NaN()
                      : std::max(rep.sup_A_to_B, rep.sup_B_to_A);
  return rep;
}

}  // namespace cutloc
