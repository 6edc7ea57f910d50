#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nlab/field.hpp"

using namespace nlab;

TEST_CASE("grid construction and indexing") {
  const Grid g(1, 2.0, 0.5);
  CHECK(g.cells == 8);
  CHECK(g.nodes == 9);
  CHECK(g.coord(0) == -2.0);
  CHECK(g.coord(8) == 2.0);
  CHECK_THROWS_AS(Grid(1, 1.0, 0.3), std::invalid_argument);  // 2L/h not even
  const Grid g2(2, 1.0, 0.5);
  CHECK(g2.size() == 25);
  const Pt p = g2.point(g2.index(1, 2));
  CHECK(p[0] == doctest::Approx(-0.5));
  CHECK(p[1] == doctest::Approx(0.0));
}

TEST_CASE("named profiles") {
  const Grid g(1, 4.0, 0.5);
  const Field c = sample_profile(g, "constant", 1.0);
  for (double v : c.values) CHECK(v == 1.0);
  CHECK(c.far.type == FarFieldType::ConstantValue);
  CHECK(c.far.value == 1.0);

  const Field a = sample_profile(g, "arctan_layer");
  CHECK(a.at(g.nodes / 2) == 0.0);
  CHECK(a.at(g.nodes - 1) > 0.8);
  CHECK(far_value(a, Pt{100.0, 0.0}) == 1.0);
  CHECK(far_value(a, Pt{-100.0, 0.0}) == -1.0);

  const Field t = sample_profile(g, "tanh_layer", 1.0);
  const int i1 = static_cast<int>((1.0 + g.L) / g.h);
  CHECK(t.at(i1) == doctest::Approx(0.7615941559557649).epsilon(1e-14));

  CHECK_THROWS_AS(sample_profile(g, "nope"), std::invalid_argument);
}

TEST_CASE("tilted far field extends the profile transversally") {
  const Grid g(2, 4.0, 0.25);
  const Field u = sample_profile(g, "tilted_layer", 30.0, 1.0);
  // a point just past the box continues the 1D profile along the tilt
  const double th = 30.0 * M_PI / 180.0;
  const Pt e{std::sin(th), std::cos(th)};
  const Pt p{4.5, 0.5};
  const double got = far_value(u, p);
  CHECK(got == doctest::Approx(std::tanh(p[0] * e[0] + p[1] * e[1]))
                   .epsilon(5e-2));
  // deep in the far field the sign rule takes over
  CHECK(far_value(u, Pt{50.0, 50.0}) == 1.0);
  CHECK(far_value(u, Pt{-50.0, -50.0}) == -1.0);
}

TEST_CASE("gradient: constants, affine, and layer oracle") {
  const Grid g(1, 2.0, 0.1);
  Field c = sample_profile(g, "constant", 3.0);
  for (double v : gradient(c)[0].values) CHECK(v == doctest::Approx(0.0));

  Field lin(g, 0.0, FarField::zero());
  for (std::size_t i = 0; i < g.size(); ++i) lin[i] = 2.5 * g.point(i)[0];
  const auto gl = gradient(lin, GhostMode::LinearExtrapolate);
  for (double v : gl[0].values) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));

  const Grid gf(1, 8.0, 0.05);
  const Field t = sample_profile(gf, "tanh_layer", 1.0);
  const auto gt = gradient(t);
  CHECK(gt[0].at(gf.nodes / 2) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("gradient of a quadratic is O(h^2)") {
  auto max_err = [](double h) {
    const Grid g(1, 2.0, h);
    Field u(g, 0.0, FarField::zero());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.point(i)[0];
      u[i] = x * x * x;  // cubic: central difference error is h^2 x
    }
    const auto gr = gradient(u, GhostMode::LinearExtrapolate);
    double e = 0.0;
    for (int i = 1; i + 1 < g.nodes; ++i) {
      const double x = g.point(i)[0];
      e = std::max(e, std::fabs(gr[0].at(i) - 3.0 * x * x));
    }
    return e;
  };
  const double ratio = max_err(0.1) / max_err(0.05);
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("log cutoff branches") {
  const TestFunction t = TestFunction::log_cutoff(16.0);
  CHECK(eval_test(t, Pt{2.0, 0.0}, 1) == 0.5);
  CHECK(eval_test(t, Pt{16.0, 0.0}, 1) == 0.0);
  CHECK(eval_test(t, Pt{std::pow(16.0, 0.75), 0.0}, 1) ==
        doctest::Approx(0.25).epsilon(1e-12));
  // continuity at branch boundaries
  for (double r : {4.0, 16.0}) {
    const double lo = eval_test(t, Pt{r - 1e-9, 0.0}, 1);
    const double hi = eval_test(t, Pt{r + 1e-9, 0.0}, 1);
    CHECK(std::fabs(lo - hi) <= 1e-7);
  }
}

TEST_CASE("plateau and bump cutoffs") {
  const TestFunction p = TestFunction::plateau(2.0);
  CHECK(eval_test(p, Pt{1.0, 0.0}, 1) == 1.0);
  CHECK(eval_test(p, Pt{3.0, 0.0}, 1) == doctest::Approx(0.5));
  CHECK(eval_test(p, Pt{4.5, 0.0}, 1) == 0.0);
  const TestFunction b = TestFunction::bump(Pt{1.0, 0.0}, 0.5);
  CHECK(eval_test(b, Pt{1.0, 0.0}, 1) == doctest::Approx(1.0));
  CHECK(eval_test(b, Pt{1.6, 0.0}, 1) == 0.0);
  for (double x = -3.0; x <= 3.0; x += 0.01)
    CHECK(eval_test(b, Pt{x, 0.0}, 1) >= 0.0);
}

TEST_CASE("ball mask") {
  const Grid g(2, 2.0, 1.0);
  const auto m = BallDomain{1.0}.mask(g);
  CHECK(m.size() == 5);  // center plus 4 axis neighbors
}

TEST_CASE("field csv round trip") {
  const Grid g(1, 1.0, 0.5);
  Field u = sample_profile(g, "tanh_layer", 1.0);
  std::ostringstream os;
  write_field_csv(u, os);
  std::istringstream is(os.str());
  const Field v = read_field_csv(is, u.far);
  REQUIRE(v.values.size() == u.values.size());
  for (std::size_t i = 0; i < u.values.size(); ++i)
    CHECK(v[i] == u[i]);  // 17 significant digits round-trips doubles
}
