#pragma once

#include <map>
#include <string>

#include "cutloc/euclidean.hpp"
#include "cutloc/gradient.hpp"
#include "cutloc/semiconcavity.hpp"
#include "cutloc/sets.hpp"

namespace cutloc {

/// Experiment configuration; parsed from a key = value file with
/// command-line overrides applied on top.
struct RunConfig {
  std::string geometry = "sphere";  // sphere | torus | disk | rectangle | mesh
  int sphere_subdivisions = 4;
  int torus_n = 64;
  double disk_R = 1.0;
  double rect_L = 2.0, rect_W = 1.0;
  double h = 0.02;               // planar mesh scale
  std::string mesh_path;         // geometry = mesh
  int basepoint = -1;            // -1: geometry default

  std::vector<double> m_list = {8, 16, 32, 64};
  std::vector<double> lambda_list;
  bool solve_gradient = false;
  bool semiconcavity = false;
  double semiconcavity_rho = 0.78539816339744831;  // pi/4
  int semiconcavity_chords = 200;

  double tol = 1e-8;
  double tol_feas = 1e-6;
  double tol_gap = 1e-7;
  long max_iter = -1;  // -1: solver default
  double eps_c = -1.0;  // -1: max(1e-6, h^2 m / 8)
  double eps_g = -1.0;  // -1: max(0.02, 2h)

  std::string output_dir = ".";
  unsigned seed = 1;
  bool parallel = false;  // independent solves, no warm starts
  bool write_fields = true;

  void validate() const;
};

/// key = value lines; '#' comments. Lists are comma-separated.
RunConfig parse_config_file(const std::string& path);
void apply_config_entry(RunConfig* config, const std::string& key,
                        const std::string& value);

struct SweepRow {
  double m = 0.0;
  double lambda = 0.0;  // 0 = the plain elastic set row
  double sup_gap = 0.0;
  double max_grad = 0.0;
  double hausdorff_sym = 0.0;
  double hausdorff_E_to_GT = 0.0;
  double hausdorff_GT_to_E = 0.0;
  double C_hat = 0.0;
  long iters = 0;
  bool converged = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool all_converged = true;
  std::vector<std::string> artifacts;  // paths written, relative to output_dir
};

/// Full experiment: per m solve, extract sets, compare against ground truth
/// where available, and write sweep.csv + run_report.json + per-m fields.
SweepResult run_sweep(const RunConfig& config);

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

}  // namespace cutloc
