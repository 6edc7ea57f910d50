#pragma once

#include <functional>
#include <vector>

#include "nlab/field.hpp"
#include "nlab/kernel.hpp"
#include "nlab/nonlinearity.hpp"

namespace nlab {

enum class TailRule { Auto, AnalyticPowerTail, TruncatedNone, DecayBound };

struct QuadratureScheme {
  int epsilon_cells = 1;
  TailRule tail = TailRule::Auto;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

// Lattice offset in the lexicographic half-space, with the midpoint weight
// K(z) h^n attached.
struct Offset {
  int di = 0;
  int dj = 0;
  double w = 0.0;
  double r = 0.0;
};

// Quadrature state for one (grid, kernel) pair: precomputed translation
// invariant weights, ghost padding, and tail handling.
//
// The principal value is realized by antipodal pairing: both sides x + z and
// x - z of every offset are accumulated together, so the odd part of the
// integrand cancels exactly as in the symmetric-limit definition.
class NonlocalOperator {
 public:
  NonlocalOperator(const Grid& g, const KernelSpec& k, const PhiSpec& phi,
                   QuadratureScheme q = {});

  double apply_T(const Field& u, std::size_t idx) const;
  Field apply_T_grid(const Field& u) const;  // OpenMP-parallel over nodes

  double apply_L(const Field& u, const Field& v, std::size_t idx) const;
  Field apply_L_grid(const Field& u, const Field& v) const;

  // sup |T[u] - f(u)| over the core region (max-norm radius; default L/2).
  double residual(const Field& u, const ReactionSpec& r,
                  double core_radius = -1.0) const;
  Field residual_field(const Field& u, const ReactionSpec& r) const;

  // Weak form: 1/2 double sum of Phi'[u(x)-u(y)][v(x)-v(y)]K minus the
  // reaction term, for a test function supported inside the box.
  double weak_residual(const Field& u, const TestFunction& v,
                       const ReactionSpec& r) const;

  // Integral of g(u_far(y)) K(y-x) dy over the region beyond lattice
  // coverage, as a bracket (exact closed form collapses it to a point).
  Interval tail_integral(const Field& u, std::size_t idx,
                         const std::function<double(double)>& g) const;

  const Grid& grid() const { return grid_; }
  const KernelSpec& kernel() const { return kernel_; }
  const PhiSpec& phi_spec() const { return phi_; }
  const QuadratureScheme& scheme() const { return scheme_; }
  const std::vector<Offset>& half_offsets() const { return offsets_; }
  double ghost_pad() const { return pad_; }
  TailRule tail_rule() const { return tail_; }
  // Interaction radius actually used for lattice sums.
  double lattice_radius() const;

  // Value of u at node (i,j) shifted by (di,dj): grid value, ghost closure
  // value inside the padded box, or none (covered by the tail).
  bool side_value(const Field& u, int i, int j, int di, int dj,
                  double& out) const;

 private:
  Grid grid_;
  KernelSpec kernel_;
  PhiSpec phi_;
  QuadratureScheme scheme_;
  std::vector<Offset> offsets_;
  double pad_ = 0.0;
  TailRule tail_ = TailRule::TruncatedNone;
  double cell_measure_ = 1.0;
};

// Sum operator: a nonempty sequence of (kernel, nonlinearity) terms on a
// common grid; reduces exactly to the single operator for one term.
class SumOperator {
 public:
  SumOperator(const Grid& g,
              const std::vector<std::pair<KernelSpec, PhiSpec>>& terms,
              QuadratureScheme q = {});
  double apply_S(const Field& u, std::size_t idx) const;
  Field apply_S_grid(const Field& u) const;
  double residual(const Field& u, const ReactionSpec& r,
                  double core_radius = -1.0) const;
  const std::vector<NonlocalOperator>& terms() const { return terms_; }

 private:
  std::vector<NonlocalOperator> terms_;
};

// Serial reference path: naive unpaired double loop over the lattice plus
// the same tail handling. Kept for testing and benchmarking against the
// optimized OpenMP path.
namespace ref {
double apply_T_node(const Field& u, const KernelSpec& k, const PhiSpec& phi,
                    const QuadratureScheme& q, std::size_t idx);
Field apply_T_grid(const Field& u, const KernelSpec& k, const PhiSpec& phi,
                   const QuadratureScheme& q = {});
}  // namespace ref

}  // namespace nlab
