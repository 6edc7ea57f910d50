#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nlab/geometry.hpp"

namespace nlab {

// Uniform node-centered grid on [-L, L]^dim with 2L/h an even integer.
struct Grid {
  int dim = 1;
  double L = 1.0;
  double h = 0.5;

  Grid() = default;
  Grid(int dim, double L, double h);

  int cells = 2;   // 2L/h
  int nodes = 3;   // cells + 1 per axis
  std::size_t size() const {
    return dim == 1 ? static_cast<std::size_t>(nodes)
                    : static_cast<std::size_t>(nodes) * nodes;
  }
  double coord(int i) const { return -L + i * h; }
  Pt point(std::size_t idx) const {
    if (dim == 1) return {coord(static_cast<int>(idx)), 0.0};
    return {coord(static_cast<int>(idx % nodes)),
            coord(static_cast<int>(idx / nodes))};
  }
  std::size_t index(int i, int j = 0) const {
    return dim == 1 ? static_cast<std::size_t>(i)
                    : static_cast<std::size_t>(j) * nodes + i;
  }
  bool in_range(int i, int j = 0) const {
    return i >= 0 && i < nodes && (dim == 1 || (j >= 0 && j < nodes));
  }
  bool operator==(const Grid& o) const {
    return dim == o.dim && L == o.L && h == o.h;
  }
};

enum class FarFieldType { LayerSign, ConstantValue, ZeroOutside };

// Closure for u beyond the box. LayerSign is +1 / -1 past the box in the
// layer direction and constant extension transversally (so an exact 1D
// profile along `direction` extends consistently); the direction defaults
// to the last axis and may be rotated for tilted layers.
struct FarField {
  FarFieldType type = FarFieldType::ZeroOutside;
  double value = 0.0;       // ConstantValue
  Pt direction{0.0, 0.0};   // LayerSign unit direction

  static FarField layer_sign(int dim) {
    return {FarFieldType::LayerSign, 0.0,
            dim == 1 ? Pt{1.0, 0.0} : Pt{0.0, 1.0}};
  }
  static FarField layer_sign_dir(const Pt& e) {
    return {FarFieldType::LayerSign, 0.0, e};
  }
  static FarField constant(double c) {
    return {FarFieldType::ConstantValue, c, {0.0, 0.0}};
  }
  static FarField zero() { return {}; }
};

struct Field {
  Grid grid;
  std::vector<double> values;
  FarField far;

  Field() = default;
  Field(const Grid& g, double fill, const FarField& ff)
      : grid(g), values(g.size(), fill), far(ff) {}

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double at(int i, int j = 0) const { return values[grid.index(i, j)]; }
};

// Value of the far-field closure at a point outside the box. Points inside
// resolve to bilinear interpolation of grid values (used for transverse
// extension of tilted closures).
double far_value(const Field& u, const Pt& p);

// Grid values everywhere: in-box points interpolate bilinearly, outside
// points fall back to the closure.
double interp_value(const Field& u, const Pt& p);

// Named initial/reference profiles.
//   tanh_layer(w), arctan_layer, constant(c), tilted_layer(angle_deg, w),
//   radial (|x|^2), perturbed_layer(w, amplitude, seed)
Field sample_profile(const Grid& g, const std::string& profile,
                     double param = 1.0, double param2 = 0.0,
                     std::uint64_t seed = 0);

enum class GhostMode { FarFieldClosure, LinearExtrapolate };

// Central differences in the interior, second-order one-sided closure at
// box faces with ghost values supplied per `mode`. Returns dim fields.
std::vector<Field> gradient(const Field& u,
                            GhostMode mode = GhostMode::FarFieldClosure);

enum class TestFunctionType { LogCutoff, PlateauCutoff, Bump };

// Compactly supported Lipschitz test functions. LogCutoff is the standard
// logarithmic cutoff: 1/2 on B_sqrt(R), log-interpolated to 0 at |x| = R.
struct TestFunction {
  TestFunctionType type = TestFunctionType::PlateauCutoff;
  double R = 1.0;
  Pt center{0.0, 0.0};
  double radius = 1.0;

  static TestFunction log_cutoff(double R);
  static TestFunction plateau(double R);
  static TestFunction bump(const Pt& center, double radius);
};

double eval_test(const TestFunction& t, const Pt& x, int dim);

Field sample_test(const TestFunction& t, const Grid& g);

// Ball domain realized as the node mask {|x| <= R}.
struct BallDomain {
  double R = 1.0;
  std::vector<std::size_t> mask(const Grid& g) const;
};

void write_field_csv(const Field& u, std::ostream& os);
void write_field_csv(const Field& u, const std::string& path);
Field read_field_csv(std::istream& is, const FarField& ff);

}  // namespace nlab
