#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlab/operator.hpp"

namespace nlab {

struct FlowParams {
  double tau = -1.0;  // <= 0: 0.5 h^alpha capped by the kernel-mass bound
  long max_iter = 200000;
  double tol = 1e-6;
  bool clamp = false;
  double clamp_lo = -1.1;
  double clamp_hi = 1.1;
  std::uint64_t seed = 0;
  double core_radius = -1.0;  // residual region; < 0: L/2
  // For ConstantValue closures: keep the far field equal to the interior
  // mean each step, so uniform states stay uniform under the flow (used by
  // the Liouville probes, where the sought solutions are constants).
  bool track_far_constant = false;
};

enum class FlowStatus { Converged, MaxIter, Diverged };

struct FlowLogEntry {
  long iter = 0;
  double residual = 0.0;
  double sup_change = 0.0;
};

struct FlowResult {
  Field u;
  long iterations = 0;
  double final_residual = 0.0;
  FlowStatus status = FlowStatus::MaxIter;
  int tau_halvings = 0;
  double tau_final = 0.0;
  std::vector<FlowLogEntry> log;
};

// Damped explicit gradient flow u <- u - tau (T[u] - f(u)). Stops on the
// core-region sup residual; tau auto-halves (at most 6 times) when the
// residual loses monotonicity; sup |u| past 1e6, or a residual plateau with
// sustained amplitude drift, is reported as divergence.
FlowResult relax(const Field& u0, const KernelSpec& k, const PhiSpec& phi,
                 const ReactionSpec& reaction, QuadratureScheme q,
                 FlowParams p);

struct LayerReport {
  FlowResult flow;
  bool monotone = false;
  double limit_err_left = 0.0;
  double limit_err_right = 0.0;
  bool limits_ok = false;
};

// Layer profile from tanh initial data with the +-1 far field.
LayerReport solve_layer_1d(const KernelSpec& k, const PhiSpec& phi,
                           const ReactionSpec& reaction, const Grid& g,
                           FlowParams p);

// 2D flow; init in {extruded, tilted, perturbed}; init_param is the tilt
// angle in degrees or the perturbation amplitude.
FlowResult solve_2d(const KernelSpec& k, const PhiSpec& phi,
                    const ReactionSpec& reaction, const Grid& g,
                    const std::string& init, double init_param, FlowParams p);

struct LiouvilleRun {
  std::string init;
  FlowStatus status = FlowStatus::MaxIter;
  std::string verdict;  // converged-to-constant | diverged | converged-nonconstant
  double sup_deviation = 0.0;
  double mean = 0.0;  // interior mean of the final state (converged runs)
};

// Sign-condition probes: requires f >= 0 everywhere or t f(t) <= 0
// everywhere (sampled), then relaxes several seeded bounded initial data.
std::vector<LiouvilleRun> liouville_probe(const KernelSpec& k,
                                          const PhiSpec& phi,
                                          const ReactionSpec& reaction,
                                          const Grid& g, FlowParams p);

void write_flow_log_csv(const std::vector<FlowLogEntry>& log,
                        const std::string& path);

}  // namespace nlab
