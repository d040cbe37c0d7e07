#include "cutloc/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cutloc/io.hpp"

namespace cutloc {

void RunConfig::validate() const {
  const bool model = geometry == "sphere" || geometry == "torus";
  const bool planar = geometry == "disk" || geometry == "rectangle";
  if (!model && !planar && geometry != "mesh")
    throw std::invalid_argument("unknown geometry '" + geometry + "'");
  if (geometry == "mesh" && mesh_path.empty())
    throw std::invalid_argument("geometry = mesh needs mesh_path");
  if (m_list.empty()) throw std::invalid_argument("empty m list");
  double prev = 0.0;
  for (double m : m_list) {
    if (m <= prev)
      throw std::invalid_argument("m list must be strictly increasing and positive");
    prev = m;
  }
  for (double l : lambda_list)
    if (l <= 0.0) throw std::invalid_argument("lambda values must be positive");
  if (h <= 0.0 || tol <= 0.0 || tol_feas <= 0.0 || tol_gap <= 0.0)
    throw std::invalid_argument("tolerances and h must be positive");
  if (sphere_subdivisions < 0 || torus_n < 2)
    throw std::invalid_argument("invalid resolution parameters");
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& v) {
  std::vector<double> out;
  std::istringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

}  // namespace

void apply_config_entry(RunConfig* c, const std::string& key,
                        const std::string& value) {
  if (key == "geometry") c->geometry = value;
  else if (key == "sphere_subdivisions") c->sphere_subdivisions = std::stoi(value);
  else if (key == "torus_n") c->torus_n = std::stoi(value);
  else if (key == "disk_R") c->disk_R = std::stod(value);
  else if (key == "rect_L") c->rect_L = std::stod(value);
  else if (key == "rect_W") c->rect_W = std::stod(value);
  else if (key == "h") c->h = std::stod(value);
  else if (key == "mesh_path") c->mesh_path = value;
  else if (key == "basepoint") c->basepoint = std::stoi(value);
  else if (key == "m_list") c->m_list = parse_list(value);
  else if (key == "lambda_list") c->lambda_list = parse_list(value);
  else if (key == "solve_gradient") c->solve_gradient = parse_bool(value);
  else if (key == "semiconcavity") c->semiconcavity = parse_bool(value);
  else if (key == "semiconcavity_rho") c->semiconcavity_rho = std::stod(value);
  else if (key == "semiconcavity_chords") c->semiconcavity_chords = std::stoi(value);
  else if (key == "tol") c->tol = std::stod(value);
  else if (key == "tol_feas") c->tol_feas = std::stod(value);
  else if (key == "tol_gap") c->tol_gap = std::stod(value);
  else if (key == "max_iter") c->max_iter = std::stol(value);
  else if (key == "eps_c") c->eps_c = std::stod(value);
  else if (key == "eps_g") c->eps_g = std::stod(value);
  else if (key == "output_dir") c->output_dir = value;
  else if (key == "seed") c->seed = static_cast<unsigned>(std::stoul(value));
  else if (key == "parallel") c->parallel = parse_bool(value);
  else if (key == "write_fields") c->write_fields = parse_bool(value);
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  RunConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    apply_config_entry(&c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

namespace {

// Everything run_sweep needs to know about the geometry in one place.
struct SweepGeometry {
  std::optional<PlanarDomain> domain;
  std::optional<TriangleMesh> owned_mesh;
  std::optional<Operators> owned_ops;
  const TriangleMesh* mesh = nullptr;
  const Operators* ops = nullptr;
  VertexField d;
  bool planar = false;

  std::function<RegionLabeling(double)> ground_truth;  // null if none

  bool can_sample_geodesics = false;
  GeodesicSample::Kind kind = GeodesicSample::Kind::Planar;
  double planar_extent = 1.0;
  Eigen::Vector2d planar_center = Eigen::Vector2d::Zero();
  std::function<FieldEvaluator(const VertexField&)> make_evaluator;
};

SweepGeometry build_geometry(const RunConfig& cfg) {
  SweepGeometry g;
  if (cfg.geometry == "disk" || cfg.geometry == "rectangle") {
    g.domain = cfg.geometry == "disk"
                   ? disk_domain(cfg.disk_R, cfg.h)
                   : rectangle_domain(cfg.rect_L, cfg.rect_W, cfg.h);
    g.mesh = &g.domain->mesh;
    g.ops = &g.domain->ops;
    g.d = boundary_distance(*g.domain).values;
    g.planar = true;
    const PlanarDomain* dom = &*g.domain;
    g.ground_truth = [dom](double l) { return medial_ground_truth(*dom, l); };
    g.can_sample_geodesics = true;
    g.kind = GeodesicSample::Kind::Planar;
    if (cfg.geometry == "disk") {
      g.planar_extent = 0.65 * cfg.disk_R;
    } else {
      g.planar_extent = 0.45 * std::min(cfg.rect_L, cfg.rect_W);
      g.planar_center = {cfg.rect_L / 2.0, cfg.rect_W / 2.0};
    }
    const TriangleMesh* mesh = g.mesh;
    g.make_evaluator = [mesh](const VertexField& u) {
      return mesh_field_evaluator(*mesh, u);
    };
    return g;
  }

  if (cfg.geometry == "sphere")
    g.owned_mesh = icosphere(cfg.sphere_subdivisions);
  else if (cfg.geometry == "torus")
    g.owned_mesh = flat_torus_grid(cfg.torus_n);
  else
    g.owned_mesh = read_mesh(cfg.mesh_path);
  if (cfg.basepoint >= 0) g.owned_mesh->set_basepoint(cfg.basepoint);
  if (!g.owned_mesh->basepoint()) g.owned_mesh->set_basepoint(0);
  g.owned_ops = build_operators(*g.owned_mesh);
  g.mesh = &*g.owned_mesh;
  g.ops = &*g.owned_ops;
  g.d = fast_march(*g.mesh, {*g.mesh->basepoint()}).values;

  if (cfg.geometry == "sphere" && cfg.basepoint <= 0) {
    const TriangleMesh* mesh = g.mesh;
    g.ground_truth = [mesh](double l) {
      return ground_truth_cut(Surface::UnitSphere, *mesh, l);
    };
    g.can_sample_geodesics = true;
    g.kind = GeodesicSample::Kind::Sphere;
    g.make_evaluator = [mesh](const VertexField& u) {
      return mesh_field_evaluator(*mesh, u);
    };
  } else if (cfg.geometry == "torus" && cfg.basepoint <= 0) {
    const TriangleMesh* mesh = g.mesh;
    g.ground_truth = [mesh](double l) {
      return ground_truth_cut(Surface::FlatUnitTorus, *mesh, l);
    };
    g.can_sample_geodesics = true;
    g.kind = GeodesicSample::Kind::Torus;
    g.make_evaluator = [mesh](const VertexField& u) {
      return torus_field_evaluator(*mesh, u);
    };
  }
  return g;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One-sided and symmetric distances vs ground truth; NaN when undefined.
void fill_hausdorff(const TriangleMesh& mesh, const RegionLabeling& E,
                    const RegionLabeling* gt, SweepRow* row) {
  row->hausdorff_sym = kNaN;
  row->hausdorff_E_to_GT = kNaN;
  row->hausdorff_GT_to_E = kNaN;
  if (!gt) return;
  if (E.empty() && gt->empty()) return;
  HausdorffReport rep = hausdorff(mesh, E, *gt);
  row->hausdorff_E_to_GT = rep.sup_A_to_B;
  row->hausdorff_GT_to_E = rep.sup_B_to_A;
  row->hausdorff_sym = rep.symmetric;
}

std::string format_m(double m) {
  std::ostringstream ss;
  ss << m;
  std::string s = ss.str();
  for (char& ch : s)
    if (ch == '.') ch = 'p';
  return s;
}

}  // namespace

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(17);
  out << "m,lambda,sup_gap,max_grad,hausdorff_sym,hausdorff_E_to_GT,"
         "hausdorff_GT_to_E,C_hat,iters,converged\n";
  for (const SweepRow& r : rows)
    out << r.m << ',' << r.lambda << ',' << r.sup_gap << ',' << r.max_grad
        << ',' << r.hausdorff_sym << ',' << r.hausdorff_E_to_GT << ','
        << r.hausdorff_GT_to_E << ',' << r.C_hat << ',' << r.iters << ','
        << (r.converged ? 1 : 0) << '\n';
}

SweepResult run_sweep(const RunConfig& cfg) {
  cfg.validate();
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  SweepGeometry geo = build_geometry(cfg);
  const TriangleMesh& mesh = *geo.mesh;
  const double h = mesh.max_edge_length();

  std::vector<GeodesicSample> chords;
  if (cfg.semiconcavity && geo.can_sample_geodesics) {
    double max_len = geo.kind == GeodesicSample::Kind::Sphere ? 2.5
                     : geo.kind == GeodesicSample::Kind::Torus
                         ? 0.9
                         : 1.8 * geo.planar_extent;
    chords = sample_geodesics(geo.kind, cfg.semiconcavity_chords, max_len,
                              cfg.semiconcavity_rho, cfg.seed,
                              geo.planar_extent);
    for (auto& c : chords) {
      c.origin.x() += geo.planar_center.x();
      c.origin.y() += geo.planar_center.y();
    }
  }

  SweepResult result;
  VertexField warm;
  for (double m : cfg.m_list) {
    ObstacleProblem op;
    op.mesh = &mesh;
    op.ops = geo.ops;
    op.obstacle = geo.d;
    op.m = m;
    op.bc = geo.planar ? BoundaryCondition::ZeroOnBoundary
                       : BoundaryCondition::None;
    op.lower_bound_zero = !geo.planar;
    ObstacleConfig ocfg;
    ocfg.tol = cfg.tol;
    if (!cfg.parallel && warm.size() > 0) ocfg.warm_start = warm;
    SolveReport rep = solve_obstacle(op, ocfg);
    warm = rep.u;

    bool converged = rep.converged;
    long iters = rep.iterations;
    double max_grad;
    if (cfg.solve_gradient) {
      GradientProblem gp;
      gp.mesh = &mesh;
      gp.ops = geo.ops;
      gp.m = m;
      gp.bc = op.bc;
      GradientConfig gcfg;
      gcfg.tol_feas = cfg.tol_feas;
      gcfg.tol_gap = cfg.tol_gap;
      gcfg.warm_start = rep.u;
      SolveReport grep = solve_gradient_constrained(gp, gcfg);
      converged = converged && grep.converged;
      iters += grep.iterations;
      max_grad = grep.max_grad;
    } else {
      max_grad = feasibility_report(mesh, rep.u).max_grad;
    }
    result.all_converged = result.all_converged && converged;

    double c_hat = kNaN;
    if (!chords.empty()) {
      SemiconcavityReport sc = estimate_semiconcavity(
          geo.make_evaluator(rep.u), chords, 2.0 * h);
      c_hat = sc.C_hat;
    }

    const double eps_c = cfg.eps_c >= 0.0 ? cfg.eps_c : default_contact_gap(h, m);
    const double eps_g =
        cfg.eps_g >= 0.0 ? cfg.eps_g : default_gradient_threshold(h);
    RegionLabeling E =
        elastic_set(mesh, rep.u, geo.d, ElasticMode::ContactGap, eps_c);

    SweepRow row;
    row.m = m;
    row.lambda = 0.0;
    row.sup_gap = (geo.d - rep.u).maxCoeff();
    row.max_grad = max_grad;
    row.C_hat = c_hat;
    row.iters = iters;
    row.converged = converged;
    std::optional<RegionLabeling> gt0;
    if (geo.ground_truth) gt0 = geo.ground_truth(0.0);
    fill_hausdorff(mesh, E, gt0 ? &*gt0 : nullptr, &row);
    result.rows.push_back(row);

    for (double lambda : cfg.lambda_list) {
      RegionLabeling El = lambda_elastic_set(mesh, rep.u, lambda, eps_g);
      SweepRow lrow = row;
      lrow.lambda = lambda;
      std::optional<RegionLabeling> gtl;
      if (geo.ground_truth) gtl = geo.ground_truth(lambda);
      fill_hausdorff(mesh, El, gtl ? &*gtl : nullptr, &lrow);
      result.rows.push_back(lrow);
    }

    if (cfg.write_fields && mesh.has_positions()) {
      std::string base = "u_m" + format_m(m);
      std::string vtk = (fs::path(cfg.output_dir) / (base + ".vtk")).string();
      std::string csv = (fs::path(cfg.output_dir) / (base + ".csv")).string();
      write_vtk(vtk, mesh, {{"u", rep.u}, {"d", geo.d}});
      write_field_csv(csv, rep.u);
      result.artifacts.push_back(base + ".vtk");
      result.artifacts.push_back(base + ".csv");
    }
  }

  std::string csv_path =
      (fs::path(cfg.output_dir) / "sweep.csv").string();
  write_sweep_csv(csv_path, result.rows);
  result.artifacts.push_back("sweep.csv");

  nlohmann::json j;
  j["config"] = {{"geometry", cfg.geometry},
                 {"sphere_subdivisions", cfg.sphere_subdivisions},
                 {"torus_n", cfg.torus_n},
                 {"disk_R", cfg.disk_R},
                 {"rect_L", cfg.rect_L},
                 {"rect_W", cfg.rect_W},
                 {"h", cfg.h},
                 {"mesh_path", cfg.mesh_path},
                 {"basepoint", cfg.basepoint},
                 {"m_list", cfg.m_list},
                 {"lambda_list", cfg.lambda_list},
                 {"solve_gradient", cfg.solve_gradient},
                 {"semiconcavity", cfg.semiconcavity},
                 {"tol", cfg.tol},
                 {"tol_feas", cfg.tol_feas},
                 {"tol_gap", cfg.tol_gap},
                 {"eps_c", cfg.eps_c},
                 {"eps_g", cfg.eps_g},
                 {"seed", cfg.seed},
                 {"parallel", cfg.parallel}};
  j["all_converged"] = result.all_converged;
  j["artifacts"] = result.artifacts;
  nlohmann::json jrows = nlohmann::json::array();
  for (const SweepRow& r : result.rows) {
    jrows.push_back({{"m", r.m},
                     {"lambda", r.lambda},
                     {"sup_gap", r.sup_gap},
                     {"max_grad", r.max_grad},
                     {"hausdorff_sym", r.hausdorff_sym},
                     {"hausdorff_E_to_GT", r.hausdorff_E_to_GT},
                     {"hausdorff_GT_to_E", r.hausdorff_GT_to_E},
                     {"C_hat", r.C_hat},
                     {"iters", r.iters},
                     {"converged", r.converged}});
  }
  j["rows"] = jrows;
  std::ofstream jout(fs::path(cfg.output_dir) / "run_report.json");
  jout << j.dump(2) << '\n';
  result.artifacts.push_back("run_report.json");
  return result;
}

}  // namespace cutloc
