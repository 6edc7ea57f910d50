#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlab/nonlinearity.hpp"

using namespace nlab;

namespace {
const PhiSpec kVariants[] = {PhiSpec::quadratic(), PhiSpec::power(2.0),
                             PhiSpec::power(3.0), PhiSpec::power(3.5),
                             PhiSpec::curvature()};
}

TEST_CASE("closed-form spot values") {
  CHECK(phi(PhiSpec::quadratic(), 1.0) == 0.5);
  CHECK(dphi(PhiSpec::quadratic(), 0.0) == 0.0);
  CHECK(dphi(PhiSpec::power(3.0), -2.0) == doctest::Approx(-4.0));
  CHECK(ddphi(PhiSpec::curvature(), 0.0) == 1.0);
  CHECK(phi(PhiSpec::curvature(), 0.0) == 0.0);
  CHECK_THROWS_AS(PhiSpec::power(1.5), std::invalid_argument);
}

TEST_CASE("growth exponents") {
  CHECK(beta_of(PhiSpec::quadratic()) == 2.0);
  CHECK(beta_of(PhiSpec::power(3.5)) == 3.5);
  CHECK(beta_of(PhiSpec::curvature()) == 2.0);
}

TEST_CASE("oddness of dphi and positivity on the positive axis") {
  for (const auto& s : kVariants)
    for (int i = 1; i <= 100; ++i) {
      const double t = 0.1 * i;
      CHECK(dphi(s, -t) == -dphi(s, t));
      CHECK(phi(s, t) > 0.0);
      CHECK(dphi(s, t) > 0.0);
      CHECK(ddphi(s, t) > 0.0);
    }
}

TEST_CASE("derivative consistency by central differences") {
  for (const auto& s : kVariants)
    for (double t : {-1.7, -0.4, 0.3, 0.9, 2.2}) {
      const double h = 1e-4;
      const double d1 = (phi(s, t + h) - phi(s, t - h)) / (2.0 * h);
      CHECK(d1 == doctest::Approx(dphi(s, t)).epsilon(1e-6));
      const double d2 = (dphi(s, t + h) - dphi(s, t - h)) / (2.0 * h);
      CHECK(d2 == doctest::Approx(ddphi(s, t)).epsilon(1e-6));
    }
}

TEST_CASE("growth certificates on (0, 10]") {
  for (const auto& s : kVariants) {
    const double beta = beta_of(s);
    const double C = growth_constant(s);
    for (int i = 1; i <= 1000; ++i) {
      const double t = 0.01 * i;
      CHECK(ddphi(s, t) <= C * std::pow(t, beta - 2.0) * (1.0 + 1e-12));
      CHECK(dphi(s, t) <= C * std::pow(t, beta - 1.0) * (1.0 + 1e-12));
      CHECK(phi(s, t) <= C * std::pow(t, beta) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("reaction closed forms and f = F'") {
  CHECK(F_eval(ReactionSpec::double_well(), 1.0) == 0.0);
  CHECK(f_eval(ReactionSpec::double_well(), 1.0) == 0.0);
  CHECK(f_eval(ReactionSpec::double_well(), 0.5) == doctest::Approx(0.375));
  CHECK(f_eval(ReactionSpec::sine_pn(), 0.5) ==
        doctest::Approx(1.0 / M_PI).epsilon(1e-15));
  const ReactionSpec rs[] = {ReactionSpec::double_well(),
                             ReactionSpec::linear(-0.7),
                             ReactionSpec::constant(0.3),
                             ReactionSpec::sine_pn(),
                             ReactionSpec::cubic(-1.0)};
  for (const auto& r : rs)
    for (double t : {-1.5, -0.6, 0.0, 0.2, 0.8, 1.4}) {
      const double h = 1e-5;
      const double fd = (F_eval(r, t + h) - F_eval(r, t - h)) / (2.0 * h);
      CHECK(fd == doctest::Approx(f_eval(r, t)).epsilon(1e-6));
      const double dfd = (f_eval(r, t + h) - f_eval(r, t - h)) / (2.0 * h);
      CHECK(dfd == doctest::Approx(df_eval(r, t)).epsilon(1e-6));
    }
}
