#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlab/field.hpp"
#include "nlab/kernel.hpp"
#include "nlab/nonlinearity.hpp"
#include "nlab/solver.hpp"

namespace nlab {

// Line-oriented `key = value` experiment description. Unknown and duplicate
// keys are parse errors (reported with line numbers); serialization is
// canonical so parse/serialize round-trips.
struct ExperimentConfig {
  std::string experiment;

  std::string kernel_type = "power";  // power|bounded|truncated|decaying
  double kernel_lambda = 1.0;
  double kernel_Lambda = 2.0;
  double kernel_alpha = 1.0;
  double kernel_r_star = 1.0;
  double kernel_R_star = 1.0;
  double kernel_theta = 2.0;
  double kernel_C_D = 1.0;

  std::string phi_type = "quadratic";  // quadratic|power|curvature
  double phi_p = 2.0;

  std::string reaction_type = "doublewell";
  double reaction_slope = 1.0;
  double reaction_value = 0.0;
  double reaction_coef = 1.0;

  int grid_dim = 1;
  double grid_L = 10.0;
  double grid_h = 0.1;

  double solver_tau = -1.0;
  long solver_max_iter = 200000;
  double solver_tol = 1e-6;

  std::vector<double> radii;
  long seed = 0;
  std::string out_dir = "out";

  std::string init_profile = "extruded";
  double init_param = 0.0;

  // sum-operator experiment: one power-law term per (alpha, p) pair
  std::vector<double> sum_alphas;
  std::vector<double> sum_ps;

  // keys the config actually set, in canonical order (for the manifest)
  std::vector<std::string> set_keys;

  KernelSpec make_kernel() const;
  PhiSpec make_phi() const;
  ReactionSpec make_reaction() const;
  Grid make_grid() const;
  FlowParams make_flow_params() const;
  // beta(phi) > alpha(kernel) and per-experiment requirements
  void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& c);

extern const std::vector<std::string> kExperimentNames;

}  // namespace nlab
