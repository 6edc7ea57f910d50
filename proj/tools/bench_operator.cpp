// Benchmark: OpenMP-parallel operator application vs the serial reference
// double loop, with an agreement check.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "nlab/operator.hpp"

using namespace nlab;

namespace {

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void bench_case(const std::string& name, const Grid& g, const KernelSpec& k,
                const PhiSpec& phi) {
  Field u = sample_profile(g, g.dim == 1 ? "tanh_layer" : "extruded_layer");
  u.far = FarField::layer_sign(g.dim);
  NonlocalOperator op(g, k, phi);

  const double t0 = now();
  const Field a = op.apply_T_grid(u);
  const double t1 = now();
  const Field b = ref::apply_T_grid(u, k, phi);
  const double t2 = now();

  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    diff = std::max(diff, std::fabs(a[i] - b[i]));
    scale = std::max(scale, std::fabs(b[i]));
  }
  std::printf("%-28s nodes=%7zu  parallel=%8.3fs  serial=%8.3fs  "
              "speedup=%5.2fx  max_rel_diff=%.3e\n",
              name.c_str(), g.size(), t1 - t0, t2 - t1,
              (t2 - t1) / std::max(t1 - t0, 1e-12), diff / scale);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) omp_set_num_threads(std::atoi(argv[1]));
  std::printf("threads = %d\n", omp_get_max_threads());

  bench_case("1d power-law a=1.0", Grid(1, 20.0, 0.05),
             KernelSpec::power_law(1.0 / M_PI, 1.0), PhiSpec::quadratic());
  bench_case("1d truncated", Grid(1, 20.0, 0.05),
             KernelSpec::truncated(1.0, 2.0, 1.0, 1.0, 2.0),
             PhiSpec::quadratic());
  bench_case("1d power-law p=3", Grid(1, 20.0, 0.1),
             KernelSpec::power_law(1.0, 1.5), PhiSpec::power(3.0));
  bench_case("2d truncated", Grid(2, 10.0, 0.15625),
             KernelSpec::truncated(1.0, 2.0, 1.0, 0.5, 1.0),
             PhiSpec::quadratic());
  return 0;
}
