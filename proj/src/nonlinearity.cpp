#include "nlab/nonlinearity.hpp"

#include <cmath>
#include <stdexcept>

namespace nlab {

PhiSpec PhiSpec::power(double p) {
  if (p < 2.0) throw std::invalid_argument("power nonlinearity requires p >= 2");
  return {PhiType::Power, p};
}

double phi(const PhiSpec& s, double t) {
  switch (s.type) {
    case PhiType::Quadratic:
      return 0.5 * t * t;
    case PhiType::Power:
      return std::pow(std::fabs(t), s.p) / s.p;
    case PhiType::Curvature:
      return std::sqrt(1.0 + t * t) - 1.0;
  }
  return 0.0;
}

double dphi(const PhiSpec& s, double t) {
  switch (s.type) {
    case PhiType::Quadratic:
      return t;
    case PhiType::Power:
      if (t == 0.0) return 0.0;
      return std::pow(std::fabs(t), s.p - 2.0) * t;
    case PhiType::Curvature:
      return t / std::sqrt(1.0 + t * t);
  }
  return 0.0;
}

double ddphi(const PhiSpec& s, double t) {
  switch (s.type) {
    case PhiType::Quadratic:
      return 1.0;
    case PhiType::Power:
      // p > 2 at t = 0: the limit value 0 keeps the linearized integrand
      // continuous; p = 2 reduces to the quadratic case.
      if (t == 0.0) return s.p == 2.0 ? 1.0 : 0.0;
      return (s.p - 1.0) * std::pow(std::fabs(t), s.p - 2.0);
    case PhiType::Curvature:
      return std::pow(1.0 + t * t, -1.5);
  }
  return 0.0;
}

double beta_of(const PhiSpec& s) {
  return s.type == PhiType::Power ? s.p : 2.0;
}

double growth_constant(const PhiSpec& s) {
  return s.type == PhiType::Power ? std::max(1.0, s.p - 1.0) : 1.0;
}

double f_eval(const ReactionSpec& r, double t) {
  switch (r.type) {
    case ReactionType::DoubleWell:
      return t - t * t * t;
    case ReactionType::Linear:
      return r.slope * t;
    case ReactionType::Constant:
      return r.value;
    case ReactionType::SinePN:
      return std::sin(M_PI * t) / M_PI;
    case ReactionType::Cubic:
      return r.coef * t * t * t;
  }
  return 0.0;
}

double F_eval(const ReactionSpec& r, double t) {
  switch (r.type) {
    case ReactionType::DoubleWell:
      return -0.25 * (1.0 - t * t) * (1.0 - t * t);
    case ReactionType::Linear:
      return 0.5 * r.slope * t * t;
    case ReactionType::Constant:
      return r.value * t;
    case ReactionType::SinePN:
      // Normalized so F(+-1) = 0.
      return -(1.0 + std::cos(M_PI * t)) / (M_PI * M_PI);
    case ReactionType::Cubic:
      return 0.25 * r.coef * t * t * t * t;
  }
  return 0.0;
}

double df_eval(const ReactionSpec& r, double t) {
  switch (r.type) {
    case ReactionType::DoubleWell:
      return 1.0 - 3.0 * t * t;
    case ReactionType::Linear:
      return r.slope;
    case ReactionType::Constant:
      return 0.0;
    case ReactionType::SinePN:
      return std::cos(M_PI * t);
    case ReactionType::Cubic:
      return 3.0 * r.coef * t * t;
  }
  return 0.0;
}

std::string to_string(PhiType t) {
  switch (t) {
    case PhiType::Quadratic: return "quadratic";
    case PhiType::Power: return "power";
    case PhiType::Curvature: return "curvature";
  }
  return "?";
}

std::string to_string(ReactionType t) {
  switch (t) {
    case ReactionType::DoubleWell: return "doublewell";
    case ReactionType::Linear: return "linear";
    case ReactionType::Constant: return "constant";
    case ReactionType::SinePN: return "sine_pn";
    case ReactionType::Cubic: return "cubic";
  }
  return "?";
}

}  // namespace nlab
