#include "nlab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace nlab {

namespace {

constexpr double kGhostSlop = 1e-12;

double sup_norm_inf(const Pt& p, int dim) {
  return dim == 1 ? std::fabs(p[0])
                  : std::max(std::fabs(p[0]), std::fabs(p[1]));
}

// Exit distance of the ray x + r*w from the square |y|_inf <= B.
double ray_exit(const Pt& x, const Pt& w, double B) {
  double r = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 2; ++a) {
    if (w[a] > 0.0)
      r = std::min(r, (B - x[a]) / w[a]);
    else if (w[a] < 0.0)
      r = std::min(r, (-B - x[a]) / w[a]);
  }
  return std::max(r, 0.0);
}

double test_support_radius(const TestFunction& t, int dim) {
  switch (t.type) {
    case TestFunctionType::LogCutoff:
      return t.R;
    case TestFunctionType::PlateauCutoff:
      return 2.0 * t.R;
    case TestFunctionType::Bump:
      return norm(t.center, dim) + t.radius;
  }
  return 0.0;
}

}  // namespace

NonlocalOperator::NonlocalOperator(const Grid& g, const KernelSpec& k,
                                   const PhiSpec& phi, QuadratureScheme q)
    : grid_(g), kernel_(k), phi_(phi), scheme_(q) {
  if (beta_of(phi) <= k.alpha)
    throw std::invalid_argument(
        "integrability requires beta(phi) > alpha(kernel)");
  if (q.epsilon_cells < 1 && (k.type == KernelType::PowerLaw ||
                              k.type == KernelType::Decaying))
    throw std::invalid_argument("epsilon_cells >= 1 required for singular "
                                "kernels without truncation");
  switch (k.type) {
    case KernelType::PowerLaw:
    case KernelType::BoundedMeasurable:
      tail_ = TailRule::AnalyticPowerTail;
      pad_ = 0.0;
      break;
    case KernelType::Truncated:
      tail_ = TailRule::TruncatedNone;
      pad_ = k.R_star;
      break;
    case KernelType::Decaying:
      tail_ = TailRule::DecayBound;
      pad_ = k.R_star;
      break;
  }
  if (q.tail != TailRule::Auto) {
    if (q.tail == TailRule::TruncatedNone && k.type != KernelType::Truncated)
      throw std::invalid_argument(
          "TruncatedNone tail requires a truncated kernel");
    tail_ = q.tail;
  }

  const int pad_cells =
      static_cast<int>(std::ceil(pad_ / g.h - kGhostSlop));
  int dmax = 0;
  switch (k.type) {
    case KernelType::PowerLaw:
    case KernelType::BoundedMeasurable:
      dmax = g.cells;
      break;
    case KernelType::Truncated:
      dmax = static_cast<int>(std::ceil(k.R_star / g.h)) + 1;
      break;
    case KernelType::Decaying:
      dmax = g.cells + pad_cells;
      break;
  }

  cell_measure_ = g.dim == 1 ? g.h : g.h * g.h;
  auto push = [&](int di, int dj) {
    const Pt z{di * g.h, dj * g.h};
    const double r = norm(z, g.dim);
    const double kv = eval_kernel(kernel_, z, g.dim);
    if (kv == 0.0) return;
    offsets_.push_back({di, dj, kv * cell_measure_, r});
  };
  if (g.dim == 1) {
    for (int d = 1; d <= dmax; ++d) push(d, 0);
  } else {
    for (int dj = 0; dj <= dmax; ++dj)
      for (int di = dj == 0 ? 1 : -dmax; di <= dmax; ++di) push(di, dj);
  }
}

double NonlocalOperator::lattice_radius() const {
  double r = 0.0;
  for (const auto& o : offsets_) r = std::max(r, o.r);
  return r;
}

bool NonlocalOperator::side_value(const Field& u, int i, int j, int di,
                                  int dj, double& out) const {
  const Grid& g = grid_;
  const int i2 = i + di;
  const int j2 = j + dj;
  if (g.in_range(i2, g.dim == 1 ? 0 : j2)) {
    out = u[g.index(i2, j2)];
    return true;
  }
  if (pad_ <= 0.0) return false;
  const Pt p{-g.L + i2 * g.h, g.dim == 1 ? 0.0 : -g.L + j2 * g.h};
  if (sup_norm_inf(p, g.dim) <= g.L + pad_ + kGhostSlop) {
    out = far_value(u, p);
    return true;
  }
  return false;
}

Interval NonlocalOperator::tail_integral(
    const Field& u, std::size_t idx,
    const std::function<double(double)>& g) const {
  const Grid& gr = grid_;
  const Pt x = gr.point(idx);
  const double B = gr.L + pad_ + 0.5 * gr.h;
  switch (tail_) {
    case TailRule::Auto:
    case TailRule::TruncatedNone:
      return {0.0, 0.0};
    case TailRule::AnalyticPowerTail: {
      const double al = kernel_.alpha;
      if (gr.dim == 1) {
        const double dr = B - x[0];
        const double dl = B + x[0];
        const double vr = far_value(u, Pt{gr.L + gr.h + dr, 0.0});
        const double vl = far_value(u, Pt{-(gr.L + gr.h + dl), 0.0});
        double t;
        if (!kernel_.c) {
          t = kernel_.lambda / al *
              (g(vr) * std::pow(dr, -al) + g(vl) * std::pow(dl, -al));
        } else {
          // variable coefficient: numeric radial quadrature per side
          t = 0.0;
          for (int side = 0; side < 2; ++side) {
            const double d0 = side == 0 ? dr : dl;
            const double sgn = side == 0 ? 1.0 : -1.0;
            const int oct = 24, m = 8;
            double acc = 0.0;
            for (int o = 0; o < oct; ++o)
              for (int q = 0; q < m; ++q) {
                const double r = d0 * std::pow(2.0, o + (q + 0.5) / m);
                const double drr = r * (std::log(2.0) / m);
                const Pt y{x[0] + sgn * r, 0.0};
                acc += g(far_value(u, y)) *
                       eval_kernel(kernel_, Pt{sgn * r, 0.0}, 1) * drr;
              }
            const double rend = d0 * std::pow(2.0, 24);
            acc += g(far_value(u, Pt{x[0] + sgn * 4.0 * rend, 0.0})) *
                   kernel_.lambda / al * std::pow(rend, -al);
            t += acc;
          }
        }
        return {t, t};
      }
      const int na = 512;
      const int oct = 20, m = 6;
      double acc = 0.0;
      for (int a = 0; a < na; ++a) {
        const double th = (a + 0.5) * 2.0 * M_PI / na;
        const Pt w{std::cos(th), std::sin(th)};
        const double rho = ray_exit(x, w, B);
        double ray = 0.0;
        for (int o = 0; o < oct; ++o)
          for (int q = 0; q < m; ++q) {
            const double r = rho * std::pow(2.0, o + (q + 0.5) / m);
            const double drr = r * (std::log(2.0) / m);
            const Pt z = r * w;
            ray += g(far_value(u, x + z)) * eval_kernel(kernel_, z, 2) * r *
                   drr;
          }
        const double rend = rho * std::pow(2.0, oct);
        ray += g(far_value(u, x + (4.0 * rend) * w)) * kernel_.lambda / al *
               std::pow(rend, -al);
        acc += ray * (2.0 * M_PI / na);
      }
      return {acc, acc};
    }
    case TailRule::DecayBound: {
      double r0 = B - std::fabs(x[0]);
      if (gr.dim == 2) r0 = std::min(r0, B - std::fabs(x[1]));
      r0 = std::max(r0, kernel_.R_star);
      const double mass =
          kernel_.C_D * std::pow(r0, -kernel_.theta) /
          (1.0 - std::pow(2.0, -kernel_.theta));
      double glo = 0.0, ghi = 0.0;
      if (u.far.type == FarFieldType::LayerSign) {
        const double a = g(1.0), b = g(-1.0);
        glo = std::min({a, b, 0.0});
        ghi = std::max({a, b, 0.0});
      } else {
        const double c0 =
            u.far.type == FarFieldType::ConstantValue ? u.far.value : 0.0;
        const double a = g(c0);
        glo = std::min(a, 0.0);
        ghi = std::max(a, 0.0);
      }
      return {glo * mass, ghi * mass};
    }
  }
  return {0.0, 0.0};
}

double NonlocalOperator::apply_T(const Field& u, std::size_t idx) const {
  if (!(u.grid == grid_))
    throw std::invalid_argument("field grid does not match operator grid");
  const int i = grid_.dim == 1 ? static_cast<int>(idx)
                               : static_cast<int>(idx % grid_.nodes);
  const int j = grid_.dim == 1 ? 0 : static_cast<int>(idx / grid_.nodes);
  const double ui = u[idx];
  double acc = 0.0;
  for (const auto& o : offsets_) {
    double s = 0.0, v;
    if (side_value(u, i, j, o.di, o.dj, v)) s += dphi(phi_, ui - v);
    if (side_value(u, i, j, -o.di, -o.dj, v)) s += dphi(phi_, ui - v);
    acc += o.w * s;
  }
  acc += tail_integral(u, idx, [&](double c) { return dphi(phi_, ui - c); })
             .mid();
  return acc;
}

Field NonlocalOperator::apply_T_grid(const Field& u) const {
  Field out(grid_, 0.0, FarField::zero());
  const std::int64_t n = static_cast<std::int64_t>(grid_.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = apply_T(u, static_cast<std::size_t>(i));
  return out;
}

double NonlocalOperator::apply_L(const Field& u, const Field& v,
                                 std::size_t idx) const {
  if (!(u.grid == grid_) || !(v.grid == grid_))
    throw std::invalid_argument("field grids do not match operator grid");
  const int i = grid_.dim == 1 ? static_cast<int>(idx)
                               : static_cast<int>(idx % grid_.nodes);
  const int j = grid_.dim == 1 ? 0 : static_cast<int>(idx / grid_.nodes);
  const double ui = u[idx];
  const double vi = v[idx];
  double acc = 0.0;
  for (const auto& o : offsets_) {
    double s = 0.0, uy, vy;
    if (side_value(u, i, j, o.di, o.dj, uy) &&
        side_value(v, i, j, o.di, o.dj, vy))
      s += ddphi(phi_, ui - uy) * (vi - vy);
    if (side_value(u, i, j, -o.di, -o.dj, uy) &&
        side_value(v, i, j, -o.di, -o.dj, vy))
      s += ddphi(phi_, ui - uy) * (vi - vy);
    acc += o.w * s;
  }
  const double v_far =
      v.far.type == FarFieldType::ConstantValue ? v.far.value : 0.0;
  acc += tail_integral(u, idx, [&](double c) {
           return ddphi(phi_, ui - c) * (vi - v_far);
         }).mid();
  return acc;
}

Field NonlocalOperator::apply_L_grid(const Field& u, const Field& v) const {
  Field out(grid_, 0.0, FarField::zero());
  const std::int64_t n = static_cast<std::int64_t>(grid_.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        apply_L(u, v, static_cast<std::size_t>(i));
  return out;
}

double NonlocalOperator::residual(const Field& u, const ReactionSpec& r,
                                  double core_radius) const {
  if (core_radius < 0.0) core_radius = 0.5 * grid_.L;
  const std::int64_t n = static_cast<std::int64_t>(grid_.size());
  double sup = 0.0;
#pragma omp parallel for schedule(static) reduction(max : sup)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    if (sup_norm_inf(grid_.point(idx), grid_.dim) > core_radius) continue;
    const double res = std::fabs(apply_T(u, idx) - f_eval(r, u[idx]));
    sup = std::max(sup, res);
  }
  return sup;
}

Field NonlocalOperator::residual_field(const Field& u,
                                       const ReactionSpec& r) const {
  Field t = apply_T_grid(u);
  for (std::size_t i = 0; i < t.values.size(); ++i)
    t[i] -= f_eval(r, u[i]);
  return t;
}

double NonlocalOperator::weak_residual(const Field& u, const TestFunction& tf,
                                       const ReactionSpec& r) const {
  if (!(u.grid == grid_))
    throw std::invalid_argument("field grid does not match operator grid");
  if (test_support_radius(tf, grid_.dim) > grid_.L)
    throw std::invalid_argument("test function support exceeds the box");
  const Field v = sample_test(tf, grid_);
  const std::int64_t n = static_cast<std::int64_t>(grid_.size());
  std::vector<double> part(grid_.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < n; ++ii) {
    const std::size_t idx = static_cast<std::size_t>(ii);
    const int i = grid_.dim == 1 ? static_cast<int>(idx)
                                 : static_cast<int>(idx % grid_.nodes);
    const int j = grid_.dim == 1 ? 0 : static_cast<int>(idx / grid_.nodes);
    const double ui = u[idx];
    const double vi = v[idx];
    double acc = 0.0;
    for (const auto& o : offsets_) {
      // unordered pairs: forward side for grid nodes, both sides for ghosts
      const int i2 = i + o.di, j2 = j + o.dj;
      double uy;
      if (grid_.in_range(i2, grid_.dim == 1 ? 0 : j2)) {
        const double vy = v[grid_.index(i2, j2)];
        uy = u[grid_.index(i2, j2)];
        acc += o.w * dphi(phi_, ui - uy) * (vi - vy);
      } else if (side_value(u, i, j, o.di, o.dj, uy)) {
        acc += o.w * dphi(phi_, ui - uy) * vi;
      }
      const int i3 = i - o.di, j3 = j - o.dj;
      if (!grid_.in_range(i3, grid_.dim == 1 ? 0 : j3) &&
          side_value(u, i, j, -o.di, -o.dj, uy))
        acc += o.w * dphi(phi_, ui - uy) * vi;
    }
    acc += vi *
           tail_integral(u, idx, [&](double c) { return dphi(phi_, ui - c); })
               .mid();
    acc -= f_eval(r, ui) * vi;
    part[idx] = acc * cell_measure_;
  }
  return pairwise_sum(part);
}

SumOperator::SumOperator(
    const Grid& g, const std::vector<std::pair<KernelSpec, PhiSpec>>& terms,
    QuadratureScheme q) {
  if (terms.empty())
    throw std::invalid_argument("sum operator requires at least one term");
  terms_.reserve(terms.size());
  for (const auto& [k, p] : terms) terms_.emplace_back(g, k, p, q);
}

double SumOperator::apply_S(const Field& u, std::size_t idx) const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.apply_T(u, idx);
  return s;
}

Field SumOperator::apply_S_grid(const Field& u) const {
  Field out(terms_.front().grid(), 0.0, FarField::zero());
  const std::int64_t n = static_cast<std::int64_t>(out.grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = apply_S(u, static_cast<std::size_t>(i));
  return out;
}

double SumOperator::residual(const Field& u, const ReactionSpec& r,
                             double core_radius) const {
  const Grid& g = terms_.front().grid();
  if (core_radius < 0.0) core_radius = 0.5 * g.L;
  const std::int64_t n = static_cast<std::int64_t>(g.size());
  double sup = 0.0;
#pragma omp parallel for schedule(static) reduction(max : sup)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    if (sup_norm_inf(g.point(idx), g.dim) > core_radius) continue;
    sup = std::max(sup, std::fabs(apply_S(u, idx) - f_eval(r, u[idx])));
  }
  return sup;
}

namespace ref {

double apply_T_node(const Field& u, const KernelSpec& k, const PhiSpec& phi,
                    const QuadratureScheme& q, std::size_t idx) {
  NonlocalOperator op(u.grid, k, phi, q);  // tails and ghost predicate only
  const Grid& g = u.grid;
  const int i = g.dim == 1 ? static_cast<int>(idx)
                           : static_cast<int>(idx % g.nodes);
  const int j = g.dim == 1 ? 0 : static_cast<int>(idx / g.nodes);
  const double ui = u[idx];
  const double meas = g.dim == 1 ? g.h : g.h * g.h;
  const int pc = static_cast<int>(std::ceil(op.ghost_pad() / g.h));
  double acc = 0.0;
  const int jlo = g.dim == 1 ? 0 : -pc;
  const int jhi = g.dim == 1 ? 0 : g.nodes - 1 + pc;
  for (int j2 = jlo; j2 <= jhi; ++j2) {
    for (int i2 = -pc; i2 <= g.nodes - 1 + pc; ++i2) {
      if (i2 == i && j2 == j) continue;
      double v;
      if (!op.side_value(u, i, j, i2 - i, j2 - j, v)) continue;
      const Pt z{(i2 - i) * g.h, g.dim == 1 ? 0.0 : (j2 - j) * g.h};
      acc += dphi(phi, ui - v) * eval_kernel(k, z, g.dim) * meas;
    }
  }
  acc += op.tail_integral(u, idx, [&](double c) { return dphi(phi, ui - c); })
             .mid();
  return acc;
}

Field apply_T_grid(const Field& u, const KernelSpec& k, const PhiSpec& phi,
                   const QuadratureScheme& q) {
  Field out(u.grid, 0.0, FarField::zero());
  for (std::size_t i = 0; i < u.grid.size(); ++i)
    out[i] = apply_T_node(u, k, phi, q, i);
  return out;
}

}  // namespace ref

}  // namespace nlab
