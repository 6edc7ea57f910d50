#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace nlab {

// Points and lattice offsets live in at most two dimensions; the active
// dimension is carried alongside (dim == 1 leaves the second slot at zero).
using Pt = std::array<double, 2>;

inline double norm(const Pt& p, int dim) {
  return dim == 1 ? std::fabs(p[0]) : std::hypot(p[0], p[1]);
}

inline double dot(const Pt& a, const Pt& b, int dim) {
  double s = a[0] * b[0];
  if (dim == 2) s += a[1] * b[1];
  return s;
}

inline Pt operator+(const Pt& a, const Pt& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Pt operator-(const Pt& a, const Pt& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Pt operator*(double s, const Pt& a) { return {s * a[0], s * a[1]}; }
inline Pt operator-(const Pt& a) { return {-a[0], -a[1]}; }

// Deterministic pairwise-tree summation. Used for every whole-grid
// reduction so results do not depend on the number of workers.
double pairwise_sum(std::span<const double> v);

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(std::span<const double>(v.data(), v.size()));
}

}  // namespace nlab
