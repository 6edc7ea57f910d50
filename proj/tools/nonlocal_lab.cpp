// nonlocal-lab: run experiments described by a key=value config file and
// emit CSV reports. See README.md for the config keys.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nlab/config.hpp"
#include "nlab/energy.hpp"
#include "nlab/operator.hpp"
#include "nlab/solver.hpp"
#include "nlab/stability.hpp"

namespace fs = std::filesystem;
using namespace nlab;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    os << content;
  }
  fs::rename(tmp, path);
}

void write_field(const Field& u, const fs::path& path) {
  std::ostringstream os;
  write_field_csv(u, os);
  atomic_write(path, os.str());
}

void write_flow_log(const std::vector<FlowLogEntry>& log,
                    const fs::path& path) {
  std::ostringstream os;
  os << "iter,residual,sup_change\n";
  for (const auto& e : log)
    os << e.iter << "," << fmt(e.residual) << "," << fmt(e.sup_change) << "\n";
  atomic_write(path, os.str());
}

const char* status_name(FlowStatus s) {
  switch (s) {
    case FlowStatus::Converged: return "converged";
    case FlowStatus::MaxIter: return "max-iter";
    case FlowStatus::Diverged: return "diverged";
  }
  return "?";
}

struct Manifest {
  std::ostringstream body;
  void kv(const std::string& k, const std::string& v) {
    body << k << " = " << v << "\n";
  }
};

Field make_base_profile(const Grid& g) {
  Field u = sample_profile(g, g.dim == 1 ? "tanh_layer" : "extruded_layer");
  u.far = FarField::layer_sign(g.dim);
  return u;
}

int run_operator_check(const ExperimentConfig& c, const fs::path& out,
                       Manifest& m) {
  const Grid g = c.make_grid();
  const KernelSpec k = c.make_kernel();
  const PhiSpec phi = c.make_phi();
  const Field u = make_base_profile(g);
  NonlocalOperator op(g, k, phi);
  const Field t_opt = op.apply_T_grid(u);
  const Field t_ref = ref::apply_T_grid(u, k, phi);
  double max_rel = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    scale = std::max(scale, std::fabs(t_ref[i]));
  std::ostringstream csv;
  csv << (g.dim == 1 ? "x,T_opt,T_ref,abs_diff\n"
                     : "x1,x2,T_opt,T_ref,abs_diff\n");
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Pt p = g.point(i);
    const double d = std::fabs(t_opt[i] - t_ref[i]);
    max_rel = std::max(max_rel, d / std::max(scale, 1e-300));
    csv << fmt(p[0]) << ",";
    if (g.dim == 2) csv << fmt(p[1]) << ",";
    csv << fmt(t_opt[i]) << "," << fmt(t_ref[i]) << "," << fmt(d) << "\n";
  }
  atomic_write(out / "operator_check.csv", csv.str());
  const KernelClassReport kr = check_kernel_class(k, g.dim, 256);
  m.kv("max_relative_difference", fmt(max_rel));
  m.kv("kernel_class_checks_pass", kr.all_pass() ? "true" : "false");
  return 0;
}

int run_layer_1d(const ExperimentConfig& c, const fs::path& out, Manifest& m) {
  const LayerReport rep =
      solve_layer_1d(c.make_kernel(), c.make_phi(), c.make_reaction(),
                     c.make_grid(), c.make_flow_params());
  write_flow_log(rep.flow.log, out / "flow_log.csv");
  write_field(rep.flow.u, out / "solution.csv");
  m.kv("status", status_name(rep.flow.status));
  m.kv("iterations", std::to_string(rep.flow.iterations));
  m.kv("final_residual", fmt(rep.flow.final_residual));
  m.kv("monotone", rep.monotone ? "true" : "false");
  m.kv("limit_err_left", fmt(rep.limit_err_left));
  m.kv("limit_err_right", fmt(rep.limit_err_right));
  return rep.flow.status == FlowStatus::Diverged ? 3 : 0;
}

int run_energy_scaling(const ExperimentConfig& c, const fs::path& out,
                       Manifest& m) {
  const Grid g = c.make_grid();
  const Field u = make_base_profile(g);
  const ScalingFit fit = energy_scaling(u, c.radii, c.make_kernel(),
                                        c.make_phi(), c.make_reaction(), {},
                                        g.dim);
  std::ostringstream csv;
  csv << "R,kinetic_interior,kinetic_cross,potential,total\n";
  for (const auto& r : fit.reports)
    csv << fmt(r.R) << "," << fmt(r.kinetic_interior) << ","
        << fmt(r.kinetic_cross) << "," << fmt(r.potential) << ","
        << fmt(r.total) << "\n";
  atomic_write(out / "energy_scaling.csv", csv.str());
  m.kv("fit_valid", fit.fit_valid ? "true" : "false");
  if (fit.fit_valid) {
    m.kv("slope", fmt(fit.slope));
    m.kv("slope_se", fmt(fit.slope_se));
    m.kv("log_corrected_ratio_spread", fmt(fit.log_corrected_ratio_spread));
  }
  return 0;
}

int run_stability(const ExperimentConfig& c, const fs::path& out,
                  Manifest& m) {
  const KernelSpec k = c.make_kernel();
  const PhiSpec phi = c.make_phi();
  const ReactionSpec reaction = c.make_reaction();
  const Grid g = c.make_grid();
  const LayerReport layer =
      solve_layer_1d(k, phi, reaction, g, c.make_flow_params());
  const Field& u = layer.flow.u;
  write_field(u, out / "solution.csv");

  const auto bumps =
      random_bumps(g, 50, static_cast<std::uint64_t>(c.seed));
  std::ostringstream csv;
  csv << "test_id,lhs,rhs,gap\n";
  for (std::size_t i = 0; i < bumps.size(); ++i) {
    const auto [lhs, rhs] = stability_gap(u, bumps[i], k, phi, reaction);
    csv << "bump_" << i << "," << fmt(lhs) << "," << fmt(rhs) << ","
        << fmt(rhs - lhs) << "\n";
  }
  atomic_write(out / "stability.csv", csv.str());

  const StabilityReport rep =
      principal_eigenpair(u, k, phi, reaction, {}, 50, 1e-10);
  const auto grads = gradient(u);
  double num = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    num += rep.eigvec[i] * grads[0][i];
    na += rep.eigvec[i] * rep.eigvec[i];
    nb += grads[0][i] * grads[0][i];
  }
  const double cosine = std::fabs(num) / std::sqrt(na * nb);
  std::ostringstream ecsv;
  ecsv << "lambda_min,positivity_ok,cosine_to_uprime\n";
  ecsv << fmt(rep.lambda_min) << "," << (rep.positivity_ok ? 1 : 0) << ","
       << fmt(cosine) << "\n";
  atomic_write(out / "eigen.csv", ecsv.str());
  m.kv("layer_status", status_name(layer.flow.status));
  m.kv("lambda_min", fmt(rep.lambda_min));
  m.kv("stable", rep.stable ? "true" : "false");
  m.kv("cosine_to_uprime", fmt(cosine));
  return layer.flow.status == FlowStatus::Diverged ? 3 : 0;
}

int run_symmetry_2d(const ExperimentConfig& c, const fs::path& out,
                    Manifest& m) {
  const KernelSpec k = c.make_kernel();
  const FlowResult fr =
      solve_2d(k, c.make_phi(), c.make_reaction(), c.make_grid(),
               c.init_profile, c.init_param, c.make_flow_params());
  write_flow_log(fr.log, out / "flow_log.csv");
  write_field(fr.u, out / "solution.csv");
  m.kv("status", status_name(fr.status));
  m.kv("iterations", std::to_string(fr.iterations));
  m.kv("final_residual", fmt(fr.final_residual));
  if (fr.status != FlowStatus::Diverged) {
    const double rad = std::isinf(k.support_radius())
                           ? c.grid_L / 8.0
                           : k.support_radius();
    m.kv("symmetry_defect", fmt(symmetry_defect(fr.u, rad)));
  }
  return fr.status == FlowStatus::Diverged ? 3 : 0;
}

int run_liouville(const ExperimentConfig& c, const fs::path& out,
                  Manifest& m) {
  const auto runs = liouville_probe(c.make_kernel(), c.make_phi(),
                                    c.make_reaction(), c.make_grid(),
                                    c.make_flow_params());
  std::ostringstream csv;
  csv << "init,status,verdict,sup_deviation,mean\n";
  for (const auto& r : runs)
    csv << r.init << "," << status_name(r.status) << "," << r.verdict << ","
        << fmt(r.sup_deviation) << "," << fmt(r.mean) << "\n";
  atomic_write(out / "liouville.csv", csv.str());
  m.kv("runs", std::to_string(runs.size()));
  // divergence here is a mathematical finding, not a failure
  return 0;
}

int run_sum_operator(const ExperimentConfig& c, const fs::path& out,
                     Manifest& m) {
  const Grid g = c.make_grid();
  std::vector<std::pair<KernelSpec, PhiSpec>> terms;
  for (std::size_t i = 0; i < c.sum_alphas.size(); ++i)
    terms.emplace_back(KernelSpec::power_law(c.kernel_lambda, c.sum_alphas[i]),
                       c.sum_ps[i] == 2.0 ? PhiSpec::quadratic()
                                          : PhiSpec::power(c.sum_ps[i]));
  SumOperator op(g, terms);
  const Field u = make_base_profile(g);
  const ReactionSpec reaction = c.make_reaction();

  std::ostringstream csv;
  csv << "term,alpha,p,residual\n";
  for (std::size_t i = 0; i < op.terms().size(); ++i) {
    const double res = op.terms()[i].residual(u, ReactionSpec::constant(0.0));
    csv << i + 1 << "," << fmt(c.sum_alphas[i]) << "," << fmt(c.sum_ps[i])
        << "," << fmt(res) << "\n";
  }
  const double total = op.residual(u, reaction);
  csv << "sum,,," << fmt(total) << "\n";
  atomic_write(out / "sum_operator.csv", csv.str());
  m.kv("summed_residual", fmt(total));
  return 0;
}

int run_quotient(const ExperimentConfig& c, const fs::path& out, Manifest& m) {
  const KernelSpec k = c.make_kernel();
  const PhiSpec phi = c.make_phi();
  const Grid g = c.make_grid();
  const FlowResult fr =
      solve_2d(k, phi, c.make_reaction(), g, c.init_profile, c.init_param,
               c.make_flow_params());
  if (fr.status == FlowStatus::Diverged) {
    m.kv("status", "diverged");
    return 3;
  }
  const Field& u = fr.u;
  const auto grads = gradient(u);
  const Pt nu{std::sqrt(0.5), std::sqrt(0.5)};
  const QuotientData data = make_quotient(u, nu, grads[1]);
  std::ostringstream csv;
  csv << "x1,x2,defined,residual\n";
  double max_res = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Pt p = g.point(i);
    if (std::max(std::fabs(p[0]), std::fabs(p[1])) > 0.5 * g.L) continue;
    const auto r = quotient_residual(u, data, k, phi, {}, i);
    csv << fmt(p[0]) << "," << fmt(p[1]) << "," << (r ? 1 : 0) << ","
        << fmt(r.value_or(0.0)) << "\n";
    if (r) max_res = std::max(max_res, std::fabs(*r));
  }
  atomic_write(out / "quotient.csv", csv.str());

  std::vector<double> radii = c.radii;
  if (radii.empty()) radii = {g.L / 8.0, g.L / 4.0, 0.4 * g.L};
  const auto growth = quotient_growth_check(u, k, phi, radii);
  std::ostringstream gcsv;
  gcsv << "R,value,value_over_R2,bound_ok\n";
  for (const auto& s : growth)
    gcsv << fmt(s.R) << "," << fmt(s.value) << "," << fmt(s.value / (s.R * s.R))
         << "," << (s.bound_ok ? 1 : 0) << "\n";
  atomic_write(out / "quotient_growth.csv", gcsv.str());
  m.kv("status", status_name(fr.status));
  m.kv("max_masked_residual", fmt(max_res));
  m.kv("growth_bound_ok",
       !growth.empty() && growth.front().bound_ok ? "true" : "false");
  return 0;
}

int usage() {
  std::cerr << "usage: nonlocal-lab run <config> [--out <dir>] [--threads N]\n"
               "       nonlocal-lab validate <config>\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.size() < 2) return usage();
  const std::string cmd = args[0];
  const std::string cfg_path = args[1];
  std::string out_override;
  int threads = 0;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--out" && i + 1 < args.size()) {
      out_override = args[++i];
    } else if (args[i] == "--threads" && i + 1 < args.size()) {
      threads = std::stoi(args[++i]);
    } else {
      return usage();
    }
  }

  ExperimentConfig cfg;
  try {
    cfg = load_config(cfg_path);
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (cmd == "validate") {
    std::cout << serialize_config(cfg);
    return 0;
  }
  if (cmd != "run") return usage();
  if (threads > 0) omp_set_num_threads(threads);

  const fs::path out = out_override.empty() ? fs::path(cfg.out_dir)
                                            : fs::path(out_override);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory " << out << "\n";
    return 2;
  }

  Manifest m;
  const auto t0 = std::chrono::steady_clock::now();
  int code;
  try {
    if (cfg.experiment == "operator-check")
      code = run_operator_check(cfg, out, m);
    else if (cfg.experiment == "layer-1d")
      code = run_layer_1d(cfg, out, m);
    else if (cfg.experiment == "energy-scaling")
      code = run_energy_scaling(cfg, out, m);
    else if (cfg.experiment == "stability")
      code = run_stability(cfg, out, m);
    else if (cfg.experiment == "symmetry-2d")
      code = run_symmetry_2d(cfg, out, m);
    else if (cfg.experiment == "liouville")
      code = run_liouville(cfg, out, m);
    else if (cfg.experiment == "sum-operator")
      code = run_sum_operator(cfg, out, m);
    else if (cfg.experiment == "quotient")
      code = run_quotient(cfg, out, m);
    else {
      std::cerr << "error: unknown experiment " << cfg.experiment << "\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  std::ostringstream manifest;
  manifest << "# nonlocal-lab " << kVersion << "\n";
  manifest << "# resolved configuration (defaults included)\n";
  manifest << serialize_config(cfg);
  manifest << "# run record\n";
  manifest << "exit_code = " << code << "\n";
  manifest << "wall_time_seconds = " << fmt(wall) << "\n";
  manifest << m.body.str();
  atomic_write(out / "manifest.txt", manifest.str());
  return code;
}
