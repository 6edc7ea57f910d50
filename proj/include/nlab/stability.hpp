#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlab/operator.hpp"

namespace nlab {

struct GapSample {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct StabilityReport {
  double lambda_min = 0.0;
  Field eigvec;
  bool positivity_ok = false;
  std::vector<GapSample> gap_samples;
  bool converged = false;
  int iterations = 0;
  bool stable = false;  // lambda_min >= -tol
};

// Quotient machinery: psi = grad(u).nu, phi a positive candidate (or u'),
// sigma = psi/phi wherever |phi| exceeds the floor.
struct QuotientData {
  Pt nu{0.0, 0.0};
  Field psi;
  Field phi;
  Field sigma;
  std::vector<char> defined;  // |phi| > phi_floor
  double phi_floor = 0.0;
};

struct GrowthSample {
  double R = 0.0;
  double value = 0.0;
  bool bound_ok = false;
};

// Both sides of the stability inequality for one test function:
// lhs = sum f'(u) zeta^2 h^n, rhs = 1/2 double sum of the Phi''-weighted
// squared increments.
std::pair<double, double> stability_gap(const Field& u,
                                        const TestFunction& zeta,
                                        const KernelSpec& k,
                                        const PhiSpec& phi_spec,
                                        const ReactionSpec& reaction,
                                        QuadratureScheme q = {});

// Smallest eigenvalue of the symmetric form via matrix-free shifted inverse
// power iteration (conjugate-gradient inner solves).
StabilityReport principal_eigenpair(const Field& u, const KernelSpec& k,
                                    const PhiSpec& phi_spec,
                                    const ReactionSpec& reaction,
                                    QuadratureScheme q, int iters,
                                    double tol);

// One application of the stability form: L_Phi-style increment sum minus
// f'(u) v, with zero closure for v. Exposed for the dense-assembly oracle.
Field stability_form_apply(const NonlocalOperator& op, const Field& u,
                           const std::vector<double>& v,
                           const ReactionSpec& reaction);

std::pair<double, double> poincare_gap(const Field& u, const TestFunction& eta,
                                       const KernelSpec& k,
                                       const PhiSpec& phi_spec,
                                       QuadratureScheme q = {});

// Max over node pairs within |y| <= y_radius of
// |grad u(x)||grad u(x+y)| - grad u(x).grad u(x+y), normalized by the max
// squared gradient. Zero iff all gradients are parallel with equal sign.
double symmetry_defect(const Field& u, double y_radius);

QuotientData make_quotient(const Field& u, const Pt& nu, const Field& phi);

std::optional<double> quotient_residual(const Field& u,
                                        const QuotientData& data,
                                        const KernelSpec& k,
                                        const PhiSpec& phi_spec,
                                        QuadratureScheme q, std::size_t idx);

std::vector<GrowthSample> quotient_growth_check(const Field& u,
                                                const KernelSpec& k,
                                                const PhiSpec& phi_spec,
                                                const std::vector<double>& radii,
                                                QuadratureScheme q = {});

// Seeded catalog of bump test functions with centers in the core region and
// radii in [2h, L/8].
std::vector<TestFunction> random_bumps(const Grid& g, int count,
                                       std::uint64_t seed);

}  // namespace nlab
