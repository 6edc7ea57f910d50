#pragma once

#include <string>

namespace nlab {

enum class PhiType { Quadratic, Power, Curvature };

// Nonlinearity Phi with its growth record (beta, C_growth).
// Quadratic: t^2/2; Power: |t|^p/p for p >= 2; Curvature: sqrt(1+t^2)-1.
struct PhiSpec {
  PhiType type = PhiType::Quadratic;
  double p = 2.0;

  static PhiSpec quadratic() { return {PhiType::Quadratic, 2.0}; }
  static PhiSpec power(double p);
  static PhiSpec curvature() { return {PhiType::Curvature, 2.0}; }
};

double phi(const PhiSpec& s, double t);
double dphi(const PhiSpec& s, double t);
double ddphi(const PhiSpec& s, double t);

// Growth exponent: 2 for quadratic and curvature, p for the power variant.
double beta_of(const PhiSpec& s);

// Smallest default constant making the growth bounds hold with beta_of.
double growth_constant(const PhiSpec& s);

enum class ReactionType { DoubleWell, Linear, Constant, SinePN, Cubic };

// Reaction pair (F, f = F'). DoubleWell is the Allen-Cahn pair with
// F(t) = -(1/4)(1-t^2)^2; SinePN is the Peierls-Nabarro pair with
// f(t) = sin(pi t)/pi, which admits the closed-form arctan layer.
// Cubic (f = coef * t^3) backs the sign-condition Liouville probes.
struct ReactionSpec {
  ReactionType type = ReactionType::DoubleWell;
  double slope = 0.0;  // Linear
  double value = 0.0;  // Constant
  double coef = 0.0;   // Cubic

  static ReactionSpec double_well() { return {ReactionType::DoubleWell}; }
  static ReactionSpec linear(double slope) {
    return {ReactionType::Linear, slope};
  }
  static ReactionSpec constant(double value) {
    return {ReactionType::Constant, 0.0, value};
  }
  static ReactionSpec sine_pn() { return {ReactionType::SinePN}; }
  static ReactionSpec cubic(double coef) {
    return {ReactionType::Cubic, 0.0, 0.0, coef};
  }
};

double f_eval(const ReactionSpec& r, double t);
double F_eval(const ReactionSpec& r, double t);
double df_eval(const ReactionSpec& r, double t);

std::string to_string(PhiType t);
std::string to_string(ReactionType t);

}  // namespace nlab
