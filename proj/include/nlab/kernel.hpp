#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "nlab/geometry.hpp"

namespace nlab {

// Even, bounded coefficient profile c(z). Evenness is guaranteed by
// construction: the profile is always evaluated on component magnitudes.
using ProfileFn = std::function<double(const Pt&)>;

enum class KernelType { PowerLaw, BoundedMeasurable, Truncated, Decaying };

// One of the four kernel classes: pure power law lambda*|z|^{-n-alpha},
// a bounded-measurable coefficient in [lambda, Lambda], a truncated kernel
// vanishing beyond R_star, or a kernel with a power-decay tail bound.
struct KernelSpec {
  KernelType type = KernelType::PowerLaw;
  double lambda = 1.0;
  double Lambda = 1.0;
  double alpha = 1.0;
  double r_star = 0.0;
  double R_star = 0.0;
  double theta = 0.0;
  double C_D = 0.0;
  ProfileFn c;  // null means constant coefficient

  static KernelSpec power_law(double lambda, double alpha);
  static KernelSpec bounded(double lambda, double Lambda, double alpha,
                            ProfileFn c = nullptr);
  static KernelSpec truncated(double lambda, double Lambda, double alpha,
                              double r_star, double R_star,
                              ProfileFn c = nullptr);
  static KernelSpec decaying(double alpha, double R_star, double theta,
                             double C_D, double c0 = 1.0);

  // Radius beyond which the kernel vanishes identically; +inf otherwise.
  double support_radius() const {
    return type == KernelType::Truncated
               ? R_star
               : std::numeric_limits<double>::infinity();
  }

  double coefficient(const Pt& z) const;
};

// K(z) for z != 0; throws std::domain_error at the origin.
double eval_kernel(const KernelSpec& k, const Pt& z, int n);

inline double eval_kernel_1d(const KernelSpec& k, double z) {
  return eval_kernel(k, Pt{z, 0.0}, 1);
}

// Integral of K over the annulus r < |z| < 2r by midpoint quadrature.
// Decaying kernels only, r > R_star.
double tail_mass(const KernelSpec& k, double r, int n);

struct KernelCheck {
  std::string name;
  bool pass = false;
};

struct KernelClassReport {
  std::vector<KernelCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Sampled validation of the variant invariants (evenness, nonnegativity,
// comparability bounds, truncation support, tail decay). Deterministic
// sample set; reports failures instead of throwing.
KernelClassReport check_kernel_class(const KernelSpec& k, int n, int samples);

}  // namespace nlab
