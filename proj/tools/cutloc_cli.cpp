// Command-line front end: solves, sweeps, and artifact output.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cutloc/euclidean.hpp"
#include "cutloc/io.hpp"
#include "cutloc/revolution.hpp"
#include "cutloc/semiconcavity.hpp"
#include "cutloc/sweep.hpp"

namespace fs = std::filesystem;
using namespace cutloc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 2;
constexpr int kExitInvalid = 3;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path,
                  "key = value configuration file");
  cmd->add_option("--set", opts->overrides,
                  "override a config entry (key=value); flags win over the file");
}

RunConfig load_config(const CommonOpts& opts) {
  RunConfig cfg;
  if (!opts.config_path.empty()) cfg = parse_config_file(opts.config_path);
  for (const std::string& kv : opts.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    apply_config_entry(&cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

struct BuiltGeometry {
  std::optional<PlanarDomain> domain;
  std::optional<TriangleMesh> closed_mesh;
  std::optional<Operators> closed_ops;

  const TriangleMesh& mesh() const {
    return domain ? domain->mesh : *closed_mesh;
  }
  const Operators& ops() const { return domain ? domain->ops : *closed_ops; }
  bool planar() const { return domain.has_value(); }
};

BuiltGeometry build(const RunConfig& cfg) {
  BuiltGeometry g;
  if (cfg.geometry == "disk") {
    g.domain = disk_domain(cfg.disk_R, cfg.h);
  } else if (cfg.geometry == "rectangle") {
    g.domain = rectangle_domain(cfg.rect_L, cfg.rect_W, cfg.h);
  } else {
    if (cfg.geometry == "sphere")
      g.closed_mesh = icosphere(cfg.sphere_subdivisions);
    else if (cfg.geometry == "torus")
      g.closed_mesh = flat_torus_grid(cfg.torus_n);
    else if (cfg.geometry == "mesh")
      g.closed_mesh = read_mesh(cfg.mesh_path);
    else
      throw std::invalid_argument("unknown geometry '" + cfg.geometry + "'");
    if (cfg.basepoint >= 0) g.closed_mesh->set_basepoint(cfg.basepoint);
    if (!g.closed_mesh->basepoint()) g.closed_mesh->set_basepoint(0);
    g.closed_ops = build_operators(*g.closed_mesh);
  }
  return g;
}

VertexField obstacle_field(const BuiltGeometry& g) {
  if (g.planar()) return boundary_distance(*g.domain).values;
  return fast_march(g.mesh(), {*g.mesh().basepoint()}).values;
}

void write_solution(const RunConfig& cfg, const BuiltGeometry& g,
                    const SolveReport& rep, const std::string& base,
                    const nlohmann::json& extra) {
  fs::create_directories(cfg.output_dir);
  if (g.mesh().has_positions())
    write_vtk((fs::path(cfg.output_dir) / (base + ".vtk")).string(), g.mesh(),
              {{"u", rep.u}});
  write_field_csv((fs::path(cfg.output_dir) / (base + ".csv")).string(), rep.u);
  nlohmann::json j = extra;
  j["iterations"] = rep.iterations;
  j["energy"] = rep.energy;
  j["converged"] = rep.converged;
  j["kkt_infeasibility"] = rep.kkt_infeasibility;
  j["kkt_stationarity"] = rep.kkt_stationarity;
  j["kkt_complementarity"] = rep.kkt_complementarity;
  j["max_grad"] = rep.max_grad;
  j["duality_gap_rel"] = rep.duality_gap_rel;
  std::ofstream out(fs::path(cfg.output_dir) / (base + "_report.json"));
  out << j.dump(2) << '\n';
}

int cmd_mesh_info(const RunConfig& cfg) {
  BuiltGeometry g = build(cfg);
  const TriangleMesh& m = g.mesh();
  std::cout << "mesh-info: " << m.vertex_count() << " vertices, "
            << m.face_count() << " faces, " << m.edge_count() << " edges, area "
            << m.total_area() << ", max edge " << m.max_edge_length()
            << (m.has_boundary() ? ", with boundary" : ", closed");
  if (!m.has_boundary()) {
    CurvatureInfo ci = curvature_info(m);
    std::cout << ", total angle defect " << ci.total_defect << ", K "
              << ci.ricci_lower_bound << ", diameter ~" << ci.diameter_estimate
              << ", sufficient m "
              << sufficient_m(ci.ricci_lower_bound, ci.diameter_estimate, 2);
  }
  std::cout << '\n';
  for (const auto& w : m.warnings()) std::cerr << "warning: " << w << '\n';
  return kExitOk;
}

int cmd_distance(const RunConfig& cfg, int source) {
  BuiltGeometry g = build(cfg);
  if (g.planar()) {
    DistanceField d = boundary_distance(*g.domain);
    fs::create_directories(cfg.output_dir);
    write_field_csv((fs::path(cfg.output_dir) / "distance.csv").string(),
                    d.values);
    std::cout << "distance: boundary distance, max " << d.values.maxCoeff()
              << ", written to distance.csv\n";
    return kExitOk;
  }
  int src = source >= 0 ? source : *g.mesh().basepoint();
  if (src >= g.mesh().vertex_count())
    throw std::invalid_argument("source vertex out of range");
  DistanceField d = fast_march(g.mesh(), {src});
  fs::create_directories(cfg.output_dir);
  write_field_csv((fs::path(cfg.output_dir) / "distance.csv").string(),
                  d.values);
  if (g.mesh().has_positions())
    write_vtk((fs::path(cfg.output_dir) / "distance.vtk").string(), g.mesh(),
              {{"d", d.values}});
  std::cout << "distance: source " << src << ", max " << d.values.maxCoeff()
            << ", obtuse fallbacks " << d.obtuse_fallbacks
            << ", unreachable " << d.unreachable_count << '\n';
  return d.unreachable_count == 0 ? kExitOk : kExitInvalid;
}

int cmd_solve_obstacle(const RunConfig& cfg, double m) {
  BuiltGeometry g = build(cfg);
  ObstacleProblem p;
  p.mesh = &g.mesh();
  p.ops = &g.ops();
  p.obstacle = obstacle_field(g);
  p.m = m;
  p.bc = g.planar() ? BoundaryCondition::ZeroOnBoundary
                    : BoundaryCondition::None;
  p.lower_bound_zero = !g.planar();
  ObstacleConfig ocfg;
  ocfg.tol = cfg.tol;
  ocfg.max_iter = cfg.max_iter;
  SolveReport rep = solve_obstacle(p, ocfg);
  rep.max_grad = feasibility_report(g.mesh(), rep.u).max_grad;
  write_solution(cfg, g, rep, "obstacle",
                 {{"mode", "obstacle"}, {"m", m}, {"geometry", cfg.geometry}});
  std::cout << "solve-obstacle: m " << m << ", energy " << rep.energy
            << ", sup gap " << (p.obstacle - rep.u).maxCoeff() << ", kkt max "
            << std::max({rep.kkt_infeasibility, rep.kkt_stationarity,
                         rep.kkt_complementarity})
            << (rep.converged ? ", converged" : ", NOT converged") << '\n';
  return rep.converged ? kExitOk : kExitNotConverged;
}

int cmd_solve_gradient(const RunConfig& cfg, double m) {
  BuiltGeometry g = build(cfg);
  GradientProblem p;
  p.mesh = &g.mesh();
  p.ops = &g.ops();
  p.m = m;
  p.bc = g.planar() ? BoundaryCondition::ZeroOnBoundary
                    : BoundaryCondition::None;
  GradientConfig gcfg;
  gcfg.tol_feas = cfg.tol_feas;
  gcfg.tol_gap = cfg.tol_gap;
  gcfg.max_iter = cfg.max_iter;
  SolveReport rep = solve_gradient_constrained(p, gcfg);
  write_solution(cfg, g, rep, "gradient",
                 {{"mode", "gradient"}, {"m", m}, {"geometry", cfg.geometry}});
  fs::create_directories(cfg.output_dir);
  write_face_csv((fs::path(cfg.output_dir) / "gradient_norms.csv").string(),
                 face_gradient_norms(g.mesh(), rep.u));
  std::cout << "solve-gradient: m " << m << ", energy " << rep.energy
            << ", max grad " << rep.max_grad << ", rel gap "
            << rep.duality_gap_rel
            << (rep.converged ? ", converged" : ", NOT converged") << '\n';
  return rep.converged ? kExitOk : kExitNotConverged;
}

int cmd_extract(const RunConfig& cfg, double m) {
  BuiltGeometry g = build(cfg);
  ObstacleProblem p;
  p.mesh = &g.mesh();
  p.ops = &g.ops();
  p.obstacle = obstacle_field(g);
  p.m = m;
  p.bc = g.planar() ? BoundaryCondition::ZeroOnBoundary
                    : BoundaryCondition::None;
  p.lower_bound_zero = !g.planar();
  ObstacleConfig ocfg;
  ocfg.tol = cfg.tol;
  ocfg.max_iter = cfg.max_iter;
  SolveReport rep = solve_obstacle(p, ocfg);
  const double h = g.mesh().max_edge_length();
  const double eps_c = cfg.eps_c >= 0.0 ? cfg.eps_c : default_contact_gap(h, m);
  const double eps_g =
      cfg.eps_g >= 0.0 ? cfg.eps_g : default_gradient_threshold(h);

  fs::create_directories(cfg.output_dir);
  RegionLabeling E =
      elastic_set(g.mesh(), rep.u, p.obstacle, ElasticMode::ContactGap, eps_c);
  VertexField Ef(E.member.size());
  for (size_t i = 0; i < E.member.size(); ++i) Ef[i] = E.member[i];
  write_field_csv((fs::path(cfg.output_dir) / "elastic_set.csv").string(), Ef);
  std::cout << "extract: m " << m << ", |E_m| " << E.count();
  for (double lambda : cfg.lambda_list) {
    RegionLabeling El = lambda_elastic_set(g.mesh(), rep.u, lambda, eps_g);
    VertexField f(El.member.size());
    for (size_t i = 0; i < El.member.size(); ++i) f[i] = El.member[i];
    std::ostringstream name;
    name << "lambda_set_" << lambda << ".csv";
    write_field_csv((fs::path(cfg.output_dir) / name.str()).string(), f);
    std::cout << ", |E_m," << lambda << "| " << El.count();
  }
  std::cout << ", written to " << cfg.output_dir << '\n';
  return rep.converged ? kExitOk : kExitNotConverged;
}

int cmd_sweep(const RunConfig& cfg) {
  SweepResult res = run_sweep(cfg);
  std::cout << "sweep: " << res.rows.size() << " rows, "
            << res.artifacts.size() << " artifacts in " << cfg.output_dir
            << (res.all_converged ? ", all converged" : ", NOT all converged")
            << '\n';
  return res.all_converged ? kExitOk : kExitNotConverged;
}

int cmd_semiconcavity(const RunConfig& cfg, double m, bool on_distance) {
  if (cfg.geometry != "sphere" && cfg.geometry != "torus" &&
      cfg.geometry != "disk" && cfg.geometry != "rectangle")
    throw std::invalid_argument(
        "semiconcavity needs a model geometry (sphere, torus, disk, rectangle)");
  BuiltGeometry g = build(cfg);
  const double h = g.mesh().max_edge_length();

  GeodesicSample::Kind kind = GeodesicSample::Kind::Planar;
  double max_len = 1.0, extent = 1.0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  if (cfg.geometry == "sphere") {
    kind = GeodesicSample::Kind::Sphere;
    max_len = 2.5;
  } else if (cfg.geometry == "torus") {
    kind = GeodesicSample::Kind::Torus;
    max_len = 0.9;
  } else if (cfg.geometry == "disk") {
    extent = 0.65 * cfg.disk_R;
    max_len = 1.8 * extent;
  } else {
    extent = 0.45 * std::min(cfg.rect_L, cfg.rect_W);
    max_len = 1.8 * extent;
    center = {cfg.rect_L / 2.0, cfg.rect_W / 2.0};
  }
  auto chords = sample_geodesics(kind, cfg.semiconcavity_chords, max_len,
                                 cfg.semiconcavity_rho, cfg.seed, extent);
  for (auto& c : chords) {
    c.origin.x() += center.x();
    c.origin.y() += center.y();
  }

  VertexField field;
  std::string label;
  if (on_distance) {
    field = obstacle_field(g);
    label = "d_b";
  } else {
    ObstacleProblem p;
    p.mesh = &g.mesh();
    p.ops = &g.ops();
    p.obstacle = obstacle_field(g);
    p.m = m;
    p.bc = g.planar() ? BoundaryCondition::ZeroOnBoundary
                      : BoundaryCondition::None;
    p.lower_bound_zero = !g.planar();
    SolveReport rep = solve_obstacle(p);
    if (!rep.converged) return kExitNotConverged;
    field = rep.u;
    label = "u_m";
  }
  FieldEvaluator ev = cfg.geometry == "torus"
                          ? torus_field_evaluator(g.mesh(), field)
                          : mesh_field_evaluator(g.mesh(), field);
  SemiconcavityReport rep = estimate_semiconcavity(ev, chords, 2.0 * h);
  std::cout << "semiconcavity: " << label << " on " << cfg.geometry << ", C_hat "
            << rep.C_hat << " (worst chord sample " << rep.worst_sample << ", ["
            << rep.worst_a << ", " << rep.worst_b << "], lambda "
            << rep.worst_lambda << ", " << rep.chords_evaluated
            << " chords)\n";
  return kExitOk;
}

int cmd_revsurf(const RunConfig& cfg, const std::string& profile_name,
                std::vector<double> dumbbell, int nt, double m,
                const std::string& mode, bool search) {
  RevolutionProfile prof;
  if (profile_name == "sphere") {
    prof = sphere_profile(nt);
  } else if (profile_name == "dumbbell") {
    if (dumbbell.size() != 4)
      throw std::invalid_argument(
          "--dumbbell needs neck_r,neck_len,bulb_r,bulb_len");
    prof = dumbbell_profile(dumbbell[0], dumbbell[1], dumbbell[2], dumbbell[3],
                            nt);
  } else {
    throw std::invalid_argument("unknown profile '" + profile_name + "'");
  }
  fs::create_directories(cfg.output_dir);
  {
    std::ofstream out(fs::path(cfg.output_dir) / "profile.csv");
    out << std::setprecision(17) << "t,r\n";
    for (int i = 0; i < prof.size(); ++i)
      out << prof.t[i] << ',' << prof.r[i] << '\n';
  }

  if (search) {
    std::vector<RevolutionProfile> family;
    if (profile_name == "sphere") {
      family.push_back(prof);
    } else {
      for (double neck_r : {1e-2, 1e-3})
        for (double neck_len : {0.5, 1.0})
          for (double bulb_len : {2.0, 8.0})
            family.push_back(
                dumbbell_profile(neck_r, neck_len, 1.0, bulb_len, nt));
    }
    std::vector<double> m_grid = {1e-2, 1e-1, 1.0};
    auto witnesses = counterexample_search(family, m_grid);
    nlohmann::json j = nlohmann::json::array();
    for (const auto& w : witnesses)
      j.push_back({{"profile", w.profile_name},
                   {"m", w.m},
                   {"sup_gradient", w.sup_gradient},
                   {"equivalence_gap", w.equivalence_gap}});
    std::ofstream out(fs::path(cfg.output_dir) / "witnesses.json");
    out << j.dump(2) << '\n';
    std::cout << "revsurf search: " << witnesses.size()
              << " witness(es) over " << family.size() * m_grid.size()
              << " grid points";
    if (witnesses.empty())
      std::cout << " (negative result: no gradient violation on this grid)";
    std::cout << '\n';
    return kExitOk;
  }

  Solve1DReport rep = mode == "gradient" ? solve_gradient_1d(prof, m)
                                         : solve_obstacle_1d(prof, m);
  {
    std::ofstream out(fs::path(cfg.output_dir) / "rho.csv");
    out << std::setprecision(17) << "t,rho\n";
    for (int i = 0; i < prof.size(); ++i)
      out << prof.t[i] << ',' << rep.rho[i] << '\n';
  }
  std::cout << "revsurf " << mode << ": profile " << prof.name << ", m " << m
            << ", rho(T) " << rep.rho.back() << ", sup |rho'| "
            << rep.sup_gradient
            << (rep.converged ? ", converged" : ", NOT converged") << '\n';
  return rep.converged ? kExitOk : kExitNotConverged;
}

int cmd_euclid(const RunConfig& cfg, double m, const std::string& mode) {
  if (cfg.geometry != "disk" && cfg.geometry != "rectangle")
    throw std::invalid_argument("euclid needs geometry = disk or rectangle");
  BuiltGeometry g = build(cfg);
  SolveReport rep = solve_torsion(
      *g.domain, m,
      mode == "gradient" ? TorsionMode::Gradient : TorsionMode::Obstacle);
  write_solution(cfg, g, rep, "torsion",
                 {{"mode", mode}, {"m", m}, {"geometry", cfg.geometry}});
  VertexField d = boundary_distance(*g.domain).values;
  fs::create_directories(cfg.output_dir);
  for (double lambda : cfg.lambda_list) {
    RegionLabeling gt = medial_ground_truth(*g.domain, lambda);
    VertexField f(gt.member.size());
    for (size_t i = 0; i < gt.member.size(); ++i) f[i] = gt.member[i];
    std::ostringstream name;
    name << "medial_gt_" << lambda << ".csv";
    write_field_csv((fs::path(cfg.output_dir) / name.str()).string(), f);
  }
  std::cout << "euclid " << mode << ": " << cfg.geometry << ", m " << m
            << ", u max " << rep.u.maxCoeff() << ", sup gap "
            << (d - rep.u).maxCoeff()
            << (rep.converged ? ", converged" : ", NOT converged") << '\n';
  return rep.converged ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut-locus and medial-axis approximation via obstacle and "
               "gradient-constrained solves on triangle meshes"};
  app.require_subcommand(1);

  CommonOpts common;
  double m = 8.0;
  int source = -1;
  bool on_distance = false;
  std::string mode = "obstacle", profile_name = "sphere";
  std::vector<double> dumbbell;
  int nt = 2001;
  bool search = false;

  auto* c_info = app.add_subcommand("mesh-info", "mesh statistics");
  add_common(c_info, &common);
  auto* c_dist = app.add_subcommand("distance", "geodesic/boundary distance");
  add_common(c_dist, &common);
  c_dist->add_option("--source", source, "source vertex (default basepoint)");
  auto* c_obs = app.add_subcommand("solve-obstacle", "obstacle solve");
  add_common(c_obs, &common);
  c_obs->add_option("--m", m, "volume weight m");
  auto* c_grad = app.add_subcommand("solve-gradient", "gradient-constrained solve");
  add_common(c_grad, &common);
  c_grad->add_option("--m", m, "volume weight m");
  auto* c_ext = app.add_subcommand("extract", "elastic and lambda sets");
  add_common(c_ext, &common);
  c_ext->add_option("--m", m, "volume weight m");
  auto* c_sweep = app.add_subcommand("sweep", "full m-sweep with reports");
  add_common(c_sweep, &common);
  auto* c_semi = app.add_subcommand("semiconcavity", "chord-based estimate");
  add_common(c_semi, &common);
  c_semi->add_option("--m", m, "volume weight m");
  c_semi->add_flag("--distance-field", on_distance,
                   "estimate on d_b instead of u_m");
  auto* c_rev = app.add_subcommand("revsurf", "surface-of-revolution 1-D solves");
  add_common(c_rev, &common);
  c_rev->add_option("--profile", profile_name, "sphere | dumbbell");
  c_rev->add_option("--dumbbell", dumbbell,
                    "neck_r neck_len bulb_r bulb_len")->expected(4);
  c_rev->add_option("--nt", nt, "grid size");
  c_rev->add_option("--m", m, "volume weight m");
  c_rev->add_option("--mode", mode, "obstacle | gradient");
  c_rev->add_flag("--search", search, "run the counterexample search");
  auto* c_euc = app.add_subcommand("euclid", "planar torsion and medial axis");
  add_common(c_euc, &common);
  c_euc->add_option("--m", m, "volume weight m");
  c_euc->add_option("--mode", mode, "obstacle | gradient");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(common);
    if (c_info->parsed()) return cmd_mesh_info(cfg);
    if (c_dist->parsed()) return cmd_distance(cfg, source);
    if (c_obs->parsed()) return cmd_solve_obstacle(cfg, m);
    if (c_grad->parsed()) return cmd_solve_gradient(cfg, m);
    if (c_ext->parsed()) return cmd_extract(cfg, m);
    if (c_sweep->parsed()) return cmd_sweep(cfg);
    if (c_semi->parsed()) return cmd_semiconcavity(cfg, m, on_distance);
    if (c_rev->parsed())
      return cmd_revsurf(cfg, profile_name, dumbbell, nt, m, mode, search);
    if (c_euc->parsed()) return cmd_euclid(cfg, m, mode);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const MeshError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNotConverged;
  }
  return kExitInvalid;
}
