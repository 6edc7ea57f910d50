#include "nlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nlab {

Grid::Grid(int dim_, double L_, double h_) : dim(dim_), L(L_), h(h_) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("grid dimension must be 1 or 2");
  if (L <= 0.0 || h <= 0.0)
    throw std::invalid_argument("grid L and h must be positive");
  const double c = 2.0 * L / h;
  cells = static_cast<int>(std::llround(c));
  if (std::fabs(c - cells) > 1e-9 * std::max(1.0, c) || cells % 2 != 0)
    throw std::invalid_argument("2L/h must be an even integer");
  nodes = cells + 1;
}

namespace {

double bilinear(const Field& u, const Pt& p) {
  const Grid& g = u.grid;
  auto locate = [&](double x, int& i0, double& t) {
    double s = (x + g.L) / g.h;
    i0 = static_cast<int>(std::floor(s));
    i0 = std::clamp(i0, 0, g.nodes - 2);
    t = std::clamp(s - i0, 0.0, 1.0);
  };
  int i0;
  double tx;
  locate(p[0], i0, tx);
  if (g.dim == 1)
    return (1.0 - tx) * u.at(i0) + tx * u.at(i0 + 1);
  int j0;
  double ty;
  locate(p[1], j0, ty);
  return (1.0 - tx) * (1.0 - ty) * u.at(i0, j0) +
         tx * (1.0 - ty) * u.at(i0 + 1, j0) +
         (1.0 - tx) * ty * u.at(i0, j0 + 1) + tx * ty * u.at(i0 + 1, j0 + 1);
}

bool in_box(const Grid& g, const Pt& p) {
  if (std::fabs(p[0]) > g.L) return false;
  if (g.dim == 2 && std::fabs(p[1]) > g.L) return false;
  return true;
}

}  // namespace

double interp_value(const Field& u, const Pt& p) {
  if (in_box(u.grid, p)) return bilinear(u, p);
  return far_value(u, p);
}

double far_value(const Field& u, const Pt& p) {
  const Grid& g = u.grid;
  switch (u.far.type) {
    case FarFieldType::ZeroOutside:
      return 0.0;
    case FarFieldType::ConstantValue:
      return u.far.value;
    case FarFieldType::LayerSign:
      break;
  }
  const Pt& e = u.far.direction;
  if (in_box(g, p)) return bilinear(u, p);
  if (g.dim == 1) return p[0] * e[0] > 0.0 ? 1.0 : -1.0;
  // Constant extension transverse to the layer direction: slide the point
  // along the perpendicular onto the box when possible, else take the sign.
  const Pt t{e[1], -e[0]};
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool feasible = true;
  for (int a = 0; a < 2; ++a) {
    if (t[a] == 0.0) {
      if (std::fabs(p[a]) > g.L) feasible = false;
      continue;
    }
    double s0 = (-g.L - p[a]) / t[a];
    double s1 = (g.L - p[a]) / t[a];
    if (s0 > s1) std::swap(s0, s1);
    lo = std::max(lo, s0);
    hi = std::min(hi, s1);
  }
  if (feasible && lo <= hi) {
    const double s = std::clamp(0.0, lo, hi);
    return bilinear(u, p + s * t);
  }
  return dot(p, e, 2) > 0.0 ? 1.0 : -1.0;
}

Field sample_profile(const Grid& g, const std::string& profile, double param,
                     double param2, std::uint64_t seed) {
  Field u(g, 0.0, FarField::zero());
  auto xn = [&](const Pt& p) { return g.dim == 1 ? p[0] : p[1]; };
  if (profile == "tanh_layer" || profile == "extruded_layer") {
    const double w = param > 0.0 ? param : 1.0;
    u.far = FarField::layer_sign(g.dim);
    for (std::size_t i = 0; i < g.size(); ++i)
      u[i] = std::tanh(xn(g.point(i)) / w);
  } else if (profile == "arctan_layer") {
    u.far = FarField::layer_sign(g.dim);
    for (std::size_t i = 0; i < g.size(); ++i)
      u[i] = (2.0 / M_PI) * std::atan(xn(g.point(i)));
  } else if (profile == "constant") {
    u.far = FarField::constant(param);
    std::fill(u.values.begin(), u.values.end(), param);
  } else if (profile == "step") {
    u.far = FarField::layer_sign(g.dim);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double s = xn(g.point(i));
      u[i] = s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
    }
  } else if (profile == "tilted_layer") {
    const double a = param * M_PI / 180.0;
    const double w = param2 > 0.0 ? param2 : 1.0;
    const Pt e = g.dim == 1 ? Pt{1.0, 0.0} : Pt{std::sin(a), std::cos(a)};
    u.far = FarField::layer_sign_dir(e);
    for (std::size_t i = 0; i < g.size(); ++i)
      u[i] = std::tanh(dot(g.point(i), e, g.dim) / w);
  } else if (profile == "perturbed_layer") {
    const double w = param > 0.0 ? param : 1.0;
    const double amp = param2;
    u.far = FarField::layer_sign(g.dim);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> am(0.5, 1.0);
    double a[4], f[4];
    for (int k = 0; k < 4; ++k) {
      a[k] = am(rng);
      f[k] = ph(rng);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Pt p = g.point(i);
      double noise = 0.0;
      for (int k = 0; k < 4; ++k)
        noise += a[k] * std::sin((k + 1) * M_PI * p[0] / g.L + f[k]);
      const double env = std::exp(-0.25 * xn(p) * xn(p));
      u[i] = std::tanh(xn(p) / w) + amp * env * noise;
    }
  } else if (profile == "bump" || profile == "perturbed_bump") {
    // amplitude param, radius param2; smooth and compactly supported
    const double amp = param;
    const double rad = param2 > 0.0 ? param2 : 0.25 * g.L;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
    const double f0 = ph(rng), f1 = ph(rng);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Pt p = g.point(i);
      const double s = norm(p, g.dim) / rad;
      if (s >= 1.0) continue;
      double v = amp * std::exp(1.0 - 1.0 / (1.0 - s * s));
      if (profile == "perturbed_bump")
        v *= 1.0 + 0.5 * std::sin(3.0 * p[0] / rad + f0) *
                       std::cos(2.0 * xn(p) / rad + f1);
      u[i] = v;
    }
  } else if (profile == "radial") {
    u.far = FarField::zero();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Pt p = g.point(i);
      u[i] = dot(p, p, g.dim);
    }
  } else {
    throw std::invalid_argument("unknown profile: " + profile);
  }
  return u;
}

std::vector<Field> gradient(const Field& u, GhostMode mode) {
  const Grid& g = u.grid;
  if (g.nodes < 3) throw std::invalid_argument("gradient needs >= 3 nodes per axis");
  std::vector<Field> out(g.dim, Field(g, 0.0, FarField::zero()));
  auto ghost = [&](const Pt& p, std::size_t edge, std::size_t inner) {
    if (mode == GhostMode::LinearExtrapolate)
      return 2.0 * u[edge] - u[inner];
    return far_value(u, p);
  };
  const double inv2h = 1.0 / (2.0 * g.h);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    const int i = g.dim == 1 ? static_cast<int>(idx)
                             : static_cast<int>(idx % g.nodes);
    const int j = g.dim == 1 ? 0 : static_cast<int>(idx / g.nodes);
    const Pt p = g.point(idx);
    for (int a = 0; a < g.dim; ++a) {
      const int c = a == 0 ? i : j;
      double up, dn;
      if (c + 1 <= g.nodes - 1) {
        up = a == 0 ? u.at(i + 1, j) : u.at(i, j + 1);
      } else {
        Pt q = p;
        q[a] += g.h;
        up = ghost(q, idx, a == 0 ? g.index(i - 1, j) : g.index(i, j - 1));
      }
      if (c - 1 >= 0) {
        dn = a == 0 ? u.at(i - 1, j) : u.at(i, j - 1);
      } else {
        Pt q = p;
        q[a] -= g.h;
        dn = ghost(q, idx, a == 0 ? g.index(i + 1, j) : g.index(i, j + 1));
      }
      out[a][idx] = (up - dn) * inv2h;
    }
  }
  return out;
}

TestFunction TestFunction::log_cutoff(double R) {
  if (R <= 1.0) throw std::invalid_argument("log cutoff requires R > 1");
  TestFunction t;
  t.type = TestFunctionType::LogCutoff;
  t.R = R;
  return t;
}

TestFunction TestFunction::plateau(double R) {
  if (R <= 0.0) throw std::invalid_argument("plateau cutoff requires R > 0");
  TestFunction t;
  t.type = TestFunctionType::PlateauCutoff;
  t.R = R;
  return t;
}

TestFunction TestFunction::bump(const Pt& center, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("bump requires radius > 0");
  TestFunction t;
  t.type = TestFunctionType::Bump;
  t.center = center;
  t.radius = radius;
  return t;
}

double eval_test(const TestFunction& t, const Pt& x, int dim) {
  switch (t.type) {
    case TestFunctionType::LogCutoff: {
      const double r = norm(x, dim);
      if (r <= std::sqrt(t.R)) return 0.5;
      if (r >= t.R) return 0.0;
      return (std::log(t.R) - std::log(r)) / std::log(t.R);
    }
    case TestFunctionType::PlateauCutoff: {
      const double r = norm(x, dim);
      if (r <= t.R) return 1.0;
      if (r >= 2.0 * t.R) return 0.0;
      return (2.0 * t.R - r) / t.R;
    }
    case TestFunctionType::Bump: {
      const Pt d = x - t.center;
      const double s2 = dot(d, d, dim) / (t.radius * t.radius);
      if (s2 >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - s2));
    }
  }
  return 0.0;
}

Field sample_test(const TestFunction& t, const Grid& g) {
  Field v(g, 0.0, FarField::zero());
  for (std::size_t i = 0; i < g.size(); ++i)
    v[i] = eval_test(t, g.point(i), g.dim);
  return v;
}

std::vector<std::size_t> BallDomain::mask(const Grid& g) const {
  std::vector<std::size_t> m;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (norm(g.point(i), g.dim) <= R) m.push_back(i);
  return m;
}

void write_field_csv(const Field& u, std::ostream& os) {
  const Grid& g = u.grid;
  os << (g.dim == 1 ? "x,value\n" : "x,y,value\n");
  char buf[160];
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Pt p = g.point(i);
    if (g.dim == 1)
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p[0], u[i]);
    else
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p[0], p[1], u[i]);
    os << buf;
  }
}

void write_field_csv(const Field& u, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_field_csv(u, os);
}

Field read_field_csv(std::istream& is, const FarField& ff) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty field csv");
  const int dim = line.find(",y,") != std::string::npos ? 2 : 1;
  std::vector<double> xs, ys, vs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double a, b, c;
    char comma;
    if (dim == 1) {
      ls >> a >> comma >> c;
      xs.push_back(a);
    } else {
      ls >> a >> comma >> b >> comma >> c;
      xs.push_back(a);
      ys.push_back(b);
    }
    vs.push_back(c);
  }
  const double L = *std::max_element(xs.begin(), xs.end());
  std::size_t per_axis = dim == 1 ? vs.size()
                                  : static_cast<std::size_t>(std::llround(
                                        std::sqrt(static_cast<double>(vs.size()))));
  const double h = 2.0 * L / static_cast<double>(per_axis - 1);
  Field u(Grid(dim, L, h), 0.0, ff);
  if (u.values.size() != vs.size())
    throw std::runtime_error("field csv does not describe a uniform grid");
  u.values = vs;
  return u;
}

}  // namespace nlab
