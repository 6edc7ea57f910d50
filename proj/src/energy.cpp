#include "nlab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace nlab {

KineticSplit kinetic_energy(const Field& u, const BallDomain& omega,
                            const KernelSpec& k, const PhiSpec& phi,
                            QuadratureScheme q) {
  const Grid& g = u.grid;
  NonlocalOperator op(g, k, phi, q);
  if (omega.R > g.L)
    throw std::invalid_argument("ball domain exceeds the box");
  if (op.tail_rule() == TailRule::TruncatedNone &&
      omega.R + k.R_star > g.L + 1e-12)
    throw std::invalid_argument(
        "truncated kernel reaches past the box from the ball and no tail "
        "scheme is declared");

  const auto mask = omega.mask(g);
  std::vector<char> inside(g.size(), 0);
  for (auto idx : mask) inside[idx] = 1;
  const double meas = g.dim == 1 ? g.h : g.h * g.h;

  const std::int64_t m = static_cast<std::int64_t>(mask.size());
  std::vector<double> pi(mask.size(), 0.0), pc(mask.size(), 0.0),
      plo(mask.size(), 0.0), phi_(mask.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < m; ++t) {
    const std::size_t idx = mask[static_cast<std::size_t>(t)];
    const int i = g.dim == 1 ? static_cast<int>(idx)
                             : static_cast<int>(idx % g.nodes);
    const int j = g.dim == 1 ? 0 : static_cast<int>(idx / g.nodes);
    const double ui = u[idx];
    double acc_i = 0.0, acc_c = 0.0;
    for (const auto& o : op.half_offsets()) {
      for (int s = -1; s <= 1; s += 2) {
        const int i2 = i + s * o.di;
        const int j2 = j + s * o.dj;
        if (g.in_range(i2, g.dim == 1 ? 0 : j2)) {
          const std::size_t idx2 = g.index(i2, j2);
          const double e = o.w * nlab::phi(op.phi_spec(), ui - u[idx2]);
          if (inside[idx2])
            acc_i += 0.5 * e;
          else
            acc_c += e;
        } else {
          double v;
          if (op.side_value(u, i, j, s * o.di, s * o.dj, v))
            acc_c += o.w * nlab::phi(op.phi_spec(), ui - v);
        }
      }
    }
    const Interval tail = op.tail_integral(
        u, idx, [&](double c) { return nlab::phi(op.phi_spec(), ui - c); });
    acc_c += tail.mid();
    pi[static_cast<std::size_t>(t)] = acc_i * meas;
    pc[static_cast<std::size_t>(t)] = acc_c * meas;
    plo[static_cast<std::size_t>(t)] = tail.lo * meas;
    phi_[static_cast<std::size_t>(t)] = tail.hi * meas;
  }
  KineticSplit out;
  out.interior = pairwise_sum(pi);
  out.cross = pairwise_sum(pc);
  out.tail = {pairwise_sum(plo), pairwise_sum(phi_)};
  return out;
}

EnergyReport total_energy(const Field& u, const BallDomain& omega,
                          const KernelSpec& k, const PhiSpec& phi,
                          const ReactionSpec& reaction, QuadratureScheme q) {
  const Grid& g = u.grid;
  const KineticSplit ks = kinetic_energy(u, omega, k, phi, q);
  const auto mask = omega.mask(g);
  const double meas = g.dim == 1 ? g.h : g.h * g.h;
  std::vector<double> pot(mask.size());
  for (std::size_t t = 0; t < mask.size(); ++t)
    pot[t] = -F_eval(reaction, u[mask[t]]) * meas;
  EnergyReport rep;
  rep.R = omega.R;
  rep.kinetic_interior = ks.interior;
  rep.kinetic_cross = ks.cross;
  rep.potential = pairwise_sum(pot);
  rep.total = rep.kinetic_interior + rep.kinetic_cross + rep.potential;
  rep.tail_bracket = ks.tail;
  return rep;
}

ScalingFit energy_scaling(const Field& u, const std::vector<double>& radii,
                          const KernelSpec& k, const PhiSpec& phi,
                          const ReactionSpec& reaction, QuadratureScheme q,
                          int n) {
  if (radii.size() < 3)
    throw std::invalid_argument("scaling fit needs at least 3 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1])
      throw std::invalid_argument("radii must be strictly increasing");

  ScalingFit fit;
  fit.radii = radii;
  for (double R : radii) {
    fit.reports.push_back(total_energy(u, BallDomain{R}, k, phi, reaction, q));
    fit.energies.push_back(fit.reports.back().total);
  }

  fit.fit_valid = true;
  for (double e : fit.energies)
    if (!(e > 0.0)) fit.fit_valid = false;
  if (fit.fit_valid) {
    // OLS of log E on log R
    const std::size_t m = radii.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = std::log(radii[i]);
      const double y = std::log(fit.energies[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    fit.slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.slope * sx) / m;
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r =
          std::log(fit.energies[i]) - (intercept + fit.slope * std::log(radii[i]));
      ss += r * r;
    }
    if (m > 2)
      fit.slope_se = std::sqrt(ss / (m - 2) / (sxx - sx * sx / m));

    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double corr =
          std::pow(radii[i], n - 1) * std::log(radii[i]);
      if (corr > 0.0) {
        const double v = fit.energies[i] / corr;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    fit.log_corrected_ratio_spread = lo > 0.0 ? hi / lo : 0.0;
  }
  return fit;
}

}  // namespace nlab
