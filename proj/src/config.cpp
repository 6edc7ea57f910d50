#include "nlab/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nlab {

const std::vector<std::string> kExperimentNames = {
    "operator-check", "layer-1d",  "energy-scaling", "stability",
    "symmetry-2d",    "liouville", "sum-operator",   "quotient"};

namespace {

const std::vector<std::string> kKeyOrder = {
    "experiment",      "kernel.type",     "kernel.lambda",  "kernel.Lambda",
    "kernel.alpha",    "kernel.r_star",   "kernel.R_star",  "kernel.theta",
    "kernel.C_D",      "phi.type",        "phi.p",          "reaction.type",
    "reaction.slope",  "reaction.value",  "reaction.coef",  "grid.dim",
    "grid.L",          "grid.h",          "solver.tau",     "solver.max_iter",
    "solver.tol",      "radii",           "seed",           "out_dir",
    "init.profile",    "init.param",      "sum.alphas",     "sum.ps"};

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    fail(line, "expected a real number for " + key + ", got '" + v + "'");
  }
}

long parse_int(const std::string& v, int line, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    fail(line, "expected an integer for " + key + ", got '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& v, int line,
                               const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_real(trim(item), line, key));
  if (out.empty()) fail(line, "empty list for " + key);
  return out;
}

std::string fmt_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt_real(v[i]);
  }
  return s;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (seen.count(key)) fail(line, "duplicate key " + key);
    seen.insert(key);

    if (key == "experiment") {
      bool known = false;
      for (const auto& n : kExperimentNames)
        if (n == val) known = true;
      if (!known) {
        std::string names;
        for (const auto& n : kExperimentNames) names += " " + n;
        fail(line, "unknown experiment '" + val + "'; valid names:" + names);
      }
      c.experiment = val;
    } else if (key == "kernel.type") {
      if (val != "power" && val != "bounded" && val != "truncated" &&
          val != "decaying")
        fail(line, "kernel.type must be power|bounded|truncated|decaying");
      c.kernel_type = val;
    } else if (key == "kernel.lambda") {
      c.kernel_lambda = parse_real(val, line, key);
    } else if (key == "kernel.Lambda") {
      c.kernel_Lambda = parse_real(val, line, key);
    } else if (key == "kernel.alpha") {
      c.kernel_alpha = parse_real(val, line, key);
    } else if (key == "kernel.r_star") {
      c.kernel_r_star = parse_real(val, line, key);
    } else if (key == "kernel.R_star") {
      c.kernel_R_star = parse_real(val, line, key);
    } else if (key == "kernel.theta") {
      c.kernel_theta = parse_real(val, line, key);
    } else if (key == "kernel.C_D") {
      c.kernel_C_D = parse_real(val, line, key);
    } else if (key == "phi.type") {
      if (val != "quadratic" && val != "power" && val != "curvature")
        fail(line, "phi.type must be quadratic|power|curvature");
      c.phi_type = val;
    } else if (key == "phi.p") {
      c.phi_p = parse_real(val, line, key);
    } else if (key == "reaction.type") {
      if (val != "doublewell" && val != "linear" && val != "constant" &&
          val != "sine_pn" && val != "cubic")
        fail(line,
             "reaction.type must be doublewell|linear|constant|sine_pn|cubic");
      c.reaction_type = val;
    } else if (key == "reaction.slope") {
      c.reaction_slope = parse_real(val, line, key);
    } else if (key == "reaction.value") {
      c.reaction_value = parse_real(val, line, key);
    } else if (key == "reaction.coef") {
      c.reaction_coef = parse_real(val, line, key);
    } else if (key == "grid.dim") {
      const long d = parse_int(val, line, key);
      if (d != 1 && d != 2) fail(line, "grid.dim must be 1 or 2");
      c.grid_dim = static_cast<int>(d);
    } else if (key == "grid.L") {
      c.grid_L = parse_real(val, line, key);
    } else if (key == "grid.h") {
      c.grid_h = parse_real(val, line, key);
    } else if (key == "solver.tau") {
      c.solver_tau = parse_real(val, line, key);
    } else if (key == "solver.max_iter") {
      c.solver_max_iter = parse_int(val, line, key);
    } else if (key == "solver.tol") {
      c.solver_tol = parse_real(val, line, key);
    } else if (key == "radii") {
      c.radii = parse_list(val, line, key);
    } else if (key == "seed") {
      c.seed = parse_int(val, line, key);
    } else if (key == "out_dir") {
      c.out_dir = val;
    } else if (key == "init.profile") {
      if (val != "extruded" && val != "tilted" && val != "perturbed")
        fail(line, "init.profile must be extruded|tilted|perturbed");
      c.init_profile = val;
    } else if (key == "init.param") {
      c.init_param = parse_real(val, line, key);
    } else if (key == "sum.alphas") {
      c.sum_alphas = parse_list(val, line, key);
    } else if (key == "sum.ps") {
      c.sum_ps = parse_list(val, line, key);
    } else {
      fail(line, "unknown key " + key);
    }
  }
  if (c.experiment.empty())
    throw std::runtime_error("config: missing required key 'experiment'");
  for (const auto& k : kKeyOrder)
    if (seen.count(k)) c.set_keys.push_back(k);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  std::string out;
  auto emit = [&](const std::string& key, const std::string& val) {
    out += key + " = " + val + "\n";
  };
  emit("experiment", c.experiment);
  emit("kernel.type", c.kernel_type);
  emit("kernel.lambda", fmt_real(c.kernel_lambda));
  emit("kernel.Lambda", fmt_real(c.kernel_Lambda));
  emit("kernel.alpha", fmt_real(c.kernel_alpha));
  emit("kernel.r_star", fmt_real(c.kernel_r_star));
  emit("kernel.R_star", fmt_real(c.kernel_R_star));
  emit("kernel.theta", fmt_real(c.kernel_theta));
  emit("kernel.C_D", fmt_real(c.kernel_C_D));
  emit("phi.type", c.phi_type);
  emit("phi.p", fmt_real(c.phi_p));
  emit("reaction.type", c.reaction_type);
  emit("reaction.slope", fmt_real(c.reaction_slope));
  emit("reaction.value", fmt_real(c.reaction_value));
  emit("reaction.coef", fmt_real(c.reaction_coef));
  emit("grid.dim", std::to_string(c.grid_dim));
  emit("grid.L", fmt_real(c.grid_L));
  emit("grid.h", fmt_real(c.grid_h));
  emit("solver.tau", fmt_real(c.solver_tau));
  emit("solver.max_iter", std::to_string(c.solver_max_iter));
  emit("solver.tol", fmt_real(c.solver_tol));
  if (!c.radii.empty()) emit("radii", fmt_list(c.radii));
  emit("seed", std::to_string(c.seed));
  emit("out_dir", c.out_dir);
  emit("init.profile", c.init_profile);
  emit("init.param", fmt_real(c.init_param));
  if (!c.sum_alphas.empty()) emit("sum.alphas", fmt_list(c.sum_alphas));
  if (!c.sum_ps.empty()) emit("sum.ps", fmt_list(c.sum_ps));
  return out;
}

KernelSpec ExperimentConfig::make_kernel() const {
  if (kernel_type == "power")
    return KernelSpec::power_law(kernel_lambda, kernel_alpha);
  if (kernel_type == "bounded")
    return KernelSpec::bounded(kernel_lambda, kernel_Lambda, kernel_alpha);
  if (kernel_type == "truncated")
    return KernelSpec::truncated(kernel_lambda, kernel_Lambda, kernel_alpha,
                                 kernel_r_star, kernel_R_star);
  return KernelSpec::decaying(kernel_alpha, kernel_R_star, kernel_theta,
                              kernel_C_D, kernel_lambda);
}

PhiSpec ExperimentConfig::make_phi() const {
  if (phi_type == "quadratic") return PhiSpec::quadratic();
  if (phi_type == "power") return PhiSpec::power(phi_p);
  return PhiSpec::curvature();
}

ReactionSpec ExperimentConfig::make_reaction() const {
  if (reaction_type == "doublewell") return ReactionSpec::double_well();
  if (reaction_type == "linear") return ReactionSpec::linear(reaction_slope);
  if (reaction_type == "constant")
    return ReactionSpec::constant(reaction_value);
  if (reaction_type == "sine_pn") return ReactionSpec::sine_pn();
  return ReactionSpec::cubic(reaction_coef);
}

Grid ExperimentConfig::make_grid() const {
  return Grid(grid_dim, grid_L, grid_h);
}

FlowParams ExperimentConfig::make_flow_params() const {
  FlowParams p;
  p.tau = solver_tau;
  p.max_iter = solver_max_iter;
  p.tol = solver_tol;
  p.seed = static_cast<std::uint64_t>(seed);
  return p;
}

void ExperimentConfig::validate() const {
  // the kernel order is the one quantity with no sensible default
  if (experiment != "sum-operator") {
    bool has_alpha = false;
    for (const auto& key : set_keys)
      if (key == "kernel.alpha") has_alpha = true;
    if (!has_alpha)
      throw std::runtime_error("config: missing required key kernel.alpha");
  }
  const KernelSpec k = make_kernel();
  const PhiSpec phi = make_phi();
  if (beta_of(phi) <= k.alpha)
    throw std::runtime_error(
        "config: phi growth exponent must exceed kernel.alpha (beta > alpha)");
  make_grid();  // throws on bad L/h
  if (experiment == "energy-scaling" && radii.size() < 3)
    throw std::runtime_error(
        "config: energy-scaling needs 'radii' with at least 3 entries");
  if (experiment == "sum-operator") {
    if (sum_alphas.empty() || sum_alphas.size() != sum_ps.size())
      throw std::runtime_error(
          "config: sum-operator needs sum.alphas and sum.ps of equal length");
    for (std::size_t i = 0; i < sum_alphas.size(); ++i)
      if (sum_ps[i] <= sum_alphas[i])
        throw std::runtime_error(
            "config: sum-operator term " + std::to_string(i + 1) +
            " violates beta > alpha");
  }
  if ((experiment == "symmetry-2d" || experiment == "quotient") &&
      grid_dim != 2)
    throw std::runtime_error("config: " + experiment + " requires grid.dim=2");
}

}  // namespace nlab
