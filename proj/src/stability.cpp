#include "nlab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

namespace nlab {

namespace {

double dot_det(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
  return pairwise_sum(prod);
}

}  // namespace

std::pair<double, double> stability_gap(const Field& u,
                                        const TestFunction& zeta,
                                        const KernelSpec& k,
                                        const PhiSpec& phi_spec,
                                        const ReactionSpec& reaction,
                                        QuadratureScheme q) {
  const Grid& g = u.grid;
  NonlocalOperator op(g, k, phi_spec, q);
  const Field z = sample_test(zeta, g);
  const double meas = g.dim == 1 ? g.h : g.h * g.h;
  const std::int64_t n = static_cast<std::int64_t>(g.size());
  std::vector<double> pl(g.size(), 0.0), pr(g.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < n; ++ii) {
    const std::size_t idx = static_cast<std::size_t>(ii);
    const int i = g.dim == 1 ? static_cast<int>(idx)
                             : static_cast<int>(idx % g.nodes);
    const int j = g.dim == 1 ? 0 : static_cast<int>(idx / g.nodes);
    const double ui = u[idx];
    const double zi = z[idx];
    double acc = 0.0;
    for (const auto& o : op.half_offsets()) {
      const int i2 = i + o.di, j2 = j + o.dj;
      double uy;
      if (g.in_range(i2, g.dim == 1 ? 0 : j2)) {
        // unordered in-box pair, counted from the forward side only
        const double dz = zi - z[g.index(i2, j2)];
        acc += o.w * ddphi(phi_spec, ui - u[g.index(i2, j2)]) * dz * dz;
      } else if (op.side_value(u, i, j, o.di, o.dj, uy)) {
        acc += o.w * ddphi(phi_spec, ui - uy) * zi * zi;
      }
      const int i3 = i - o.di, j3 = j - o.dj;
      if (!g.in_range(i3, g.dim == 1 ? 0 : j3) &&
          op.side_value(u, i, j, -o.di, -o.dj, uy))
        acc += o.w * ddphi(phi_spec, ui - uy) * zi * zi;
    }
    acc += zi * zi *
           op.tail_integral(u, idx,
                            [&](double c) { return ddphi(phi_spec, ui - c); })
               .mid();
    pr[idx] = acc * meas;
    pl[idx] = df_eval(reaction, ui) * zi * zi * meas;
  }
  return {pairwise_sum(pl), pairwise_sum(pr)};
}

Field stability_form_apply(const NonlocalOperator& op, const Field& u,
                           const std::vector<double>& v,
                           const ReactionSpec& reaction) {
  Field vf(op.grid(), 0.0, FarField::zero());
  vf.values = v;
  Field out = op.apply_L_grid(u, vf);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out[i] -= df_eval(reaction, u[i]) * v[i];
  return out;
}

StabilityReport principal_eigenpair(const Field& u, const KernelSpec& k,
                                    const PhiSpec& phi_spec,
                                    const ReactionSpec& reaction,
                                    QuadratureScheme q, int iters,
                                    double tol) {
  if (iters < 1) throw std::invalid_argument("iters >= 1 required");
  const Grid& g = u.grid;
  NonlocalOperator op(g, k, phi_spec, q);
  const std::size_t n = g.size();

  // Gershgorin: row diagonal minus off-diagonal row sum leaves the ghost and
  // tail contribution minus f'(u), so eigenvalues >= min(-f'(u)). Shift one
  // below that to make the form SPD for the inner CG solves.
  double lo = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    lo = std::min(lo, -df_eval(reaction, u[i]));
  const double sigma = lo - 1.0;

  auto apply_A = [&](const std::vector<double>& v) {
    return stability_form_apply(op, u, v, reaction).values;
  };
  auto apply_B = [&](const std::vector<double>& v) {
    std::vector<double> w = apply_A(v);
    for (std::size_t i = 0; i < n; ++i) w[i] -= sigma * v[i];
    return w;
  };
  auto cg_solve = [&](const std::vector<double>& b) {
    std::vector<double> x(n, 0.0), r = b, p = b;
    double rs = dot_det(r, r);
    const double target = rs * 1e-20;
    for (int it = 0; it < 1000 && rs > target; ++it) {
      const std::vector<double> Bp = apply_B(p);
      const double alpha = rs / dot_det(p, Bp);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * Bp[i];
      }
      const double rs2 = dot_det(r, r);
      const double beta = rs2 / rs;
      rs = rs2;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    return x;
  };

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = 1.0 + 0.1 * std::sin(0.37 * static_cast<double>(i));
  const double meas = g.dim == 1 ? g.h : g.h * g.h;

  StabilityReport rep;
  double lambda = 0.0, prev = std::numeric_limits<double>::infinity();
  int used = 0;
  for (int it = 0; it < iters; ++it) {
    ++used;
    std::vector<double> w = cg_solve(v);
    const double nrm = std::sqrt(dot_det(w, w));
    for (auto& x : w) x /= nrm;
    const std::vector<double> Aw = apply_A(w);
    lambda = dot_det(w, Aw) / dot_det(w, w);
    v = w;
    if (std::fabs(lambda - prev) <= tol * std::max(1.0, std::fabs(lambda))) {
      rep.converged = true;
      break;
    }
    prev = lambda;
  }
  rep.iterations = used;
  rep.lambda_min = lambda;

  const double l2 = std::sqrt(dot_det(v, v) * meas);
  Field ev(g, 0.0, FarField::zero());
  for (std::size_t i = 0; i < n; ++i) ev[i] = v[i] / l2;
  // orient by the dominant entry and check one-signedness
  double amax = 0.0;
  double sgn = 1.0;
  for (double x : ev.values)
    if (std::fabs(x) > amax) {
      amax = std::fabs(x);
      sgn = x >= 0.0 ? 1.0 : -1.0;
    }
  if (sgn < 0.0)
    for (auto& x : ev.values) x = -x;
  rep.positivity_ok = true;
  for (double x : ev.values)
    if (x < -1e-8 * amax) rep.positivity_ok = false;
  rep.eigvec = std::move(ev);
  rep.stable = lambda >= -tol;
  return rep;
}

std::pair<double, double> poincare_gap(const Field& u, const TestFunction& eta,
                                       const KernelSpec& k,
                                       const PhiSpec& phi_spec,
                                       QuadratureScheme q) {
  const Grid& g = u.grid;
  NonlocalOperator op(g, k, phi_spec, q);
  const Field e = sample_test(eta, g);
  const auto grads = gradient(u);
  const int dim = g.dim;
  double gmax = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = grads[0][i] * grads[0][i];
    if (dim == 2) s += grads[1][i] * grads[1][i];
    gmax = std::max(gmax, std::sqrt(s));
  }
  const double floor = 1e-10 * gmax;
  const double meas = dim == 1 ? g.h : g.h * g.h;
  const std::int64_t n = static_cast<std::int64_t>(g.size());
  std::vector<double> pl(g.size(), 0.0), pr(g.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t ii = 0; ii < n; ++ii) {
    const std::size_t idx = static_cast<std::size_t>(ii);
    const int i = dim == 1 ? static_cast<int>(idx)
                           : static_cast<int>(idx % g.nodes);
    const int j = dim == 1 ? 0 : static_cast<int>(idx / g.nodes);
    const double ui = u[idx];
    const double ei = e[idx];
    const double gx0 = grads[0][idx];
    const double gx1 = dim == 2 ? grads[1][idx] : 0.0;
    const double nx = std::sqrt(gx0 * gx0 + gx1 * gx1);
    double al = 0.0, ar = 0.0;
    for (const auto& o : op.half_offsets()) {
      const int i2 = i + o.di, j2 = j + o.dj;
      if (!g.in_range(i2, dim == 1 ? 0 : j2)) continue;
      const std::size_t idy = g.index(i2, j2);
      const double gy0 = grads[0][idy];
      const double gy1 = dim == 2 ? grads[1][idy] : 0.0;
      const double ny = std::sqrt(gy0 * gy0 + gy1 * gy1);
      const double B = nx * ny;
      const double A = B - (gx0 * gy0 + gx1 * gy1);
      const double dd = ddphi(phi_spec, ui - u[idy]);
      const double ey = e[idy];
      if (nx > floor && ny > floor)
        al += o.w * dd * A * (ei * ei + ey * ey);
      ar += o.w * dd * B * (ei - ey) * (ei - ey);
    }
    pl[idx] = al * meas;
    pr[idx] = ar * meas;
  }
  return {pairwise_sum(pl), pairwise_sum(pr)};
}

double symmetry_defect(const Field& u, double y_radius) {
  const Grid& g = u.grid;
  if (g.dim != 2)
    throw std::invalid_argument("symmetry defect is a 2D diagnostic");
  const auto grads = gradient(u);
  double gmax2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    gmax2 = std::max(gmax2, grads[0][i] * grads[0][i] +
                                grads[1][i] * grads[1][i]);
  if (gmax2 == 0.0) return 0.0;
  const int dmax = static_cast<int>(std::ceil(y_radius / g.h));
  const std::int64_t n = static_cast<std::int64_t>(g.size());
  double defect = 0.0;
#pragma omp parallel for schedule(static) reduction(max : defect)
  for (std::int64_t ii = 0; ii < n; ++ii) {
    const std::size_t idx = static_cast<std::size_t>(ii);
    const int i = static_cast<int>(idx % g.nodes);
    const int j = static_cast<int>(idx / g.nodes);
    const double gx0 = grads[0][idx];
    const double gx1 = grads[1][idx];
    for (int dj = 0; dj <= dmax; ++dj)
      for (int di = dj == 0 ? 1 : -dmax; di <= dmax; ++di) {
        if (std::hypot(di * g.h, dj * g.h) > y_radius) continue;
        const int i2 = i + di, j2 = j + dj;
        if (!g.in_range(i2, j2)) continue;
        const std::size_t idy = g.index(i2, j2);
        const double gy0 = grads[0][idy];
        const double gy1 = grads[1][idy];
        const double A =
            std::sqrt((gx0 * gx0 + gx1 * gx1) * (gy0 * gy0 + gy1 * gy1)) -
            (gx0 * gy0 + gx1 * gy1);
        defect = std::max(defect, A);
      }
  }
  return defect / gmax2;
}

QuotientData make_quotient(const Field& u, const Pt& nu, const Field& phi) {
  QuotientData d;
  d.nu = nu;
  d.phi = phi;
  const Grid& g = u.grid;
  const auto grads = gradient(u);
  d.psi = Field(g, 0.0, FarField::zero());
  for (std::size_t i = 0; i < g.size(); ++i) {
    d.psi[i] = nu[0] * grads[0][i];
    if (g.dim == 2) d.psi[i] += nu[1] * grads[1][i];
  }
  double pmax = 0.0;
  for (double x : phi.values) pmax = std::max(pmax, std::fabs(x));
  d.phi_floor = 1e-8 * pmax;
  d.sigma = Field(g, 0.0, FarField::zero());
  d.defined.assign(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (std::fabs(phi[i]) > d.phi_floor) {
      d.defined[i] = 1;
      d.sigma[i] = d.psi[i] / phi[i];
    }
  return d;
}

std::optional<double> quotient_residual(const Field& u,
                                        const QuotientData& data,
                                        const KernelSpec& k,
                                        const PhiSpec& phi_spec,
                                        QuadratureScheme q, std::size_t idx) {
  const Grid& g = u.grid;
  if (!data.defined[idx]) return std::nullopt;
  NonlocalOperator op(g, k, phi_spec, q);
  const int i = g.dim == 1 ? static_cast<int>(idx)
                           : static_cast<int>(idx % g.nodes);
  const int j = g.dim == 1 ? 0 : static_cast<int>(idx / g.nodes);
  const double ui = u[idx];
  const double si = data.sigma[idx];
  double acc = 0.0;
  for (const auto& o : op.half_offsets())
    for (int s = -1; s <= 1; s += 2) {
      const int i2 = i + s * o.di, j2 = j + s * o.dj;
      if (!g.in_range(i2, g.dim == 1 ? 0 : j2)) continue;
      const std::size_t idy = g.index(i2, j2);
      if (!data.defined[idy]) continue;
      acc += o.w * ddphi(phi_spec, ui - u[idy]) * (si - data.sigma[idy]) *
             data.phi[idy];
    }
  return acc;
}

std::vector<GrowthSample> quotient_growth_check(
    const Field& u, const KernelSpec& k, const PhiSpec& phi_spec,
    const std::vector<double>& radii, QuadratureScheme q) {
  const Grid& g = u.grid;
  NonlocalOperator op(g, k, phi_spec, q);
  const double meas = g.dim == 1 ? g.h : g.h * g.h;
  std::vector<GrowthSample> out;
  for (double R : radii) {
    if (2.0 * R > g.L)
      throw std::invalid_argument("growth-check radius exceeds box margins");
    const std::int64_t n = static_cast<std::int64_t>(g.size());
    std::vector<double> part(g.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t ii = 0; ii < n; ++ii) {
      const std::size_t idx = static_cast<std::size_t>(ii);
      const double r = norm(g.point(idx), g.dim);
      if (r < R || r > 2.0 * R) continue;
      const int i = g.dim == 1 ? static_cast<int>(idx)
                               : static_cast<int>(idx % g.nodes);
      const int j = g.dim == 1 ? 0 : static_cast<int>(idx / g.nodes);
      const double ui = u[idx];
      double acc = 0.0;
      for (const auto& o : op.half_offsets()) {
        if (o.r > R) continue;
        for (int s = -1; s <= 1; s += 2) {
          const int i2 = i + s * o.di, j2 = j + s * o.dj;
          if (!g.in_range(i2, g.dim == 1 ? 0 : j2)) continue;
          acc += o.w * ddphi(phi_spec, ui - u[g.index(i2, j2)]) * o.r * o.r;
        }
      }
      part[idx] = acc * meas;
    }
    out.push_back({R, pairwise_sum(part), false});
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& s : out) {
    const double ratio = s.value / (s.R * s.R);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  const bool ok = lo > 0.0 ? hi / lo <= 3.0 : hi == 0.0;
  for (auto& s : out) s.bound_ok = ok;
  return out;
}

std::vector<TestFunction> random_bumps(const Grid& g, int count,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-0.5 * g.L, 0.5 * g.L);
  std::uniform_real_distribution<double> rad(2.0 * g.h, g.L / 8.0);
  std::vector<TestFunction> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Pt c{pos(rng), g.dim == 2 ? pos(rng) : 0.0};
    out.push_back(TestFunction::bump(c, rad(rng)));
  }
  return out;
}

}  // namespace nlab
