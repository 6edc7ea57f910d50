#pragma once

#include <vector>

#include "nlab/operator.hpp"

namespace nlab {

struct EnergyReport {
  double R = 0.0;
  double kinetic_interior = 0.0;
  double kinetic_cross = 0.0;
  double potential = 0.0;
  double total = 0.0;
  Interval tail_bracket;  // uncertainty carried by the far-field tail
};

struct KineticSplit {
  double interior = 0.0;
  double cross = 0.0;  // includes the tail midpoint
  Interval tail;
};

// Kinetic energy over the ball: 1/2 sum over Omega x Omega plus the full
// cross sum Omega x complement (grid, ghost, and tail parts).
KineticSplit kinetic_energy(const Field& u, const BallDomain& omega,
                            const KernelSpec& k, const PhiSpec& phi,
                            QuadratureScheme q = {});

EnergyReport total_energy(const Field& u, const BallDomain& omega,
                          const KernelSpec& k, const PhiSpec& phi,
                          const ReactionSpec& reaction,
                          QuadratureScheme q = {});

struct ScalingFit {
  std::vector<double> radii;
  std::vector<EnergyReport> reports;
  std::vector<double> energies;
  bool fit_valid = false;
  double slope = 0.0;
  double slope_se = 0.0;
  double log_corrected_ratio_spread = 0.0;  // max/min of E / (R^{n-1} log R)
};

ScalingFit energy_scaling(const Field& u, const std::vector<double>& radii,
                          const KernelSpec& k, const PhiSpec& phi,
                          const ReactionSpec& reaction, QuadratureScheme q,
                          int n);

}  // namespace nlab
