#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nlab/config.hpp"

using namespace nlab;

TEST_CASE("basic parse") {
  const ExperimentConfig c = parse_config(
      "experiment = layer-1d\n"
      "kernel.type = power\n"
      "kernel.alpha = 0.5   # half\n"
      "radii = 5, 10, 20, 40\n"
      "grid.L = 20\n"
      "grid.h = 0.1\n");
  CHECK(c.experiment == "layer-1d");
  CHECK(c.kernel_type == "power");
  CHECK(c.kernel_alpha == 0.5);
  REQUIRE(c.radii.size() == 4);
  CHECK(c.radii[3] == 40.0);
  CHECK(c.make_kernel().type == KernelType::PowerLaw);
}

TEST_CASE("errors carry line numbers") {
  using doctest::Contains;
  CHECK_THROWS_WITH_AS(
      parse_config("experiment = layer-1d\nkernel.alpha = two\n"),
      Contains("line 2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_config("experiment = layer-1d\nkernel.alpha = 1\nkernel.alpha = 2\n"),
      Contains("duplicate"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config("experiment = layer-1d\nkernle.alpha = 1\n"),
                       Contains("unknown key"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config("experiment = warp-drive\n"),
                       Contains("valid names"), std::runtime_error);
  CHECK_THROWS_AS(parse_config("kernel.alpha = 1\n"), std::runtime_error);
}

TEST_CASE("round trip is canonical") {
  const std::string text =
      "# comment\n"
      "experiment = energy-scaling\n"
      "radii = 5,10,20\n"
      "kernel.alpha = 0.5\n";
  const std::string once = serialize_config(parse_config(text));
  const std::string twice = serialize_config(parse_config(once));
  CHECK(once == twice);
}

TEST_CASE("cross-field validation") {
  // beta > alpha violated: quadratic phi (beta 2) cannot pair with alpha 2
  ExperimentConfig c = parse_config(
      "experiment = layer-1d\nkernel.alpha = 1.9999\nphi.type = quadratic\n");
  CHECK_NOTHROW(c.validate());

  ExperimentConfig bad = parse_config(
      "experiment = sum-operator\nsum.alphas = 1.5\nsum.ps = 1.2\n");
  CHECK_THROWS_AS(bad.validate(), std::runtime_error);

  ExperimentConfig es =
      parse_config("experiment = energy-scaling\nradii = 5, 10\n");
  CHECK_THROWS_AS(es.validate(), std::runtime_error);

  ExperimentConfig sym =
      parse_config("experiment = symmetry-2d\ngrid.dim = 1\n");
  CHECK_THROWS_AS(sym.validate(), std::runtime_error);

  // kernel.alpha must be set explicitly, and the message names it
  ExperimentConfig noalpha = parse_config("experiment = layer-1d\n");
  CHECK_THROWS_WITH_AS(noalpha.validate(), doctest::Contains("kernel.alpha"),
                       std::runtime_error);
}
