#include "nlab/kernel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nlab {

namespace {

Pt symmetrized(const Pt& z) { return {std::fabs(z[0]), std::fabs(z[1])}; }

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

KernelSpec KernelSpec::power_law(double lambda, double alpha) {
  require(lambda > 0.0, "power-law kernel: lambda must be positive");
  require(alpha > 0.0 && alpha < 2.0, "power-law kernel: alpha in (0,2)");
  KernelSpec k;
  k.type = KernelType::PowerLaw;
  k.lambda = k.Lambda = lambda;
  k.alpha = alpha;
  return k;
}

KernelSpec KernelSpec::bounded(double lambda, double Lambda, double alpha,
                               ProfileFn c) {
  require(lambda > 0.0, "bounded kernel: lambda must be positive");
  require(Lambda >= lambda, "bounded kernel: Lambda >= lambda required");
  require(alpha > 0.0 && alpha < 2.0, "bounded kernel: alpha in (0,2)");
  KernelSpec k;
  k.type = KernelType::BoundedMeasurable;
  k.lambda = lambda;
  k.Lambda = Lambda;
  k.alpha = alpha;
  k.c = std::move(c);
  return k;
}

KernelSpec KernelSpec::truncated(double lambda, double Lambda, double alpha,
                                 double r_star, double R_star, ProfileFn c) {
  require(lambda > 0.0, "truncated kernel: lambda must be positive");
  require(Lambda >= lambda, "truncated kernel: Lambda >= lambda required");
  require(alpha > 0.0 && alpha < 2.0, "truncated kernel: alpha in (0,2)");
  require(r_star > 0.0, "truncated kernel: r_star must be positive");
  require(R_star >= r_star, "truncated kernel: R_star >= r_star required");
  KernelSpec k;
  k.type = KernelType::Truncated;
  k.lambda = lambda;
  k.Lambda = Lambda;
  k.alpha = alpha;
  k.r_star = r_star;
  k.R_star = R_star;
  k.c = std::move(c);
  return k;
}

KernelSpec KernelSpec::decaying(double alpha, double R_star, double theta,
                                double C_D, double c0) {
  require(alpha > 0.0 && alpha < 2.0, "decaying kernel: alpha in (0,2)");
  require(R_star > 0.0, "decaying kernel: R_star must be positive");
  require(theta > 0.0, "decaying kernel: theta must be positive");
  require(C_D > 0.0, "decaying kernel: C_D must be positive");
  require(c0 > 0.0, "decaying kernel: coefficient must be positive");
  KernelSpec k;
  k.type = KernelType::Decaying;
  k.lambda = k.Lambda = c0;
  k.alpha = alpha;
  k.R_star = R_star;
  k.theta = theta;
  k.C_D = C_D;
  return k;
}

double KernelSpec::coefficient(const Pt& z) const {
  if (!c) return lambda;
  return c(symmetrized(z));
}

double eval_kernel(const KernelSpec& k, const Pt& z, int n) {
  const double r = norm(z, n);
  if (r == 0.0) throw std::domain_error("kernel is singular at the origin");
  switch (k.type) {
    case KernelType::PowerLaw:
      return k.lambda * std::pow(r, -(n + k.alpha));
    case KernelType::BoundedMeasurable:
      return k.coefficient(z) * std::pow(r, -(n + k.alpha));
    case KernelType::Truncated:
      if (r > k.R_star) return 0.0;
      return k.coefficient(z) * std::pow(r, -(n + k.alpha));
    case KernelType::Decaying:
      if (r <= k.R_star) return k.coefficient(z) * std::pow(r, -(n + k.alpha));
      // Continuous power tail; its dyadic annulus mass decays like r^-theta.
      return k.lambda * std::pow(k.R_star, k.theta - k.alpha) *
             std::pow(r, -(n + k.theta));
  }
  return 0.0;
}

double tail_mass(const KernelSpec& k, double r, int n) {
  if (k.type != KernelType::Decaying)
    throw std::invalid_argument("tail_mass requires the decaying variant");
  if (r <= k.R_star)
    throw std::invalid_argument("tail_mass requires r > R_star");
  // Midpoint rule in radius, 256 nodes per decade; the annulus [r, 2r]
  // spans log10(2) decades.
  const int m = std::max(64, static_cast<int>(std::ceil(256.0 * std::log10(2.0))));
  const double dr = r / m;
  double acc = 0.0;
  if (n == 1) {
    for (int i = 0; i < m; ++i) {
      const double s = r + (i + 0.5) * dr;
      acc += 2.0 * eval_kernel(k, Pt{s, 0.0}, 1) * dr;
    }
  } else {
    const int na = 64;
    const double dphi = 2.0 * M_PI / na;
    for (int i = 0; i < m; ++i) {
      const double s = r + (i + 0.5) * dr;
      double ring = 0.0;
      for (int j = 0; j < na; ++j) {
        const double phi = (j + 0.5) * dphi;
        ring += eval_kernel(k, Pt{s * std::cos(phi), s * std::sin(phi)}, 2);
      }
      acc += ring * dphi * s * dr;
    }
  }
  return acc;
}

KernelClassReport check_kernel_class(const KernelSpec& k, int n, int samples) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  KernelClassReport rep;
  std::mt19937_64 rng(0x6b65726eULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> logr(-2.0, 1.5);

  std::vector<Pt> pts;
  pts.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    Pt dir{unit(rng), n == 2 ? unit(rng) : 0.0};
    const double nd = norm(dir, n);
    if (nd == 0.0) {
      dir = {1.0, 0.0};
    } else {
      dir = (1.0 / nd) * dir;
    }
    pts.push_back(std::pow(10.0, logr(rng)) * dir);
  }

  bool even = true, nonneg = true;
  for (const auto& z : pts) {
    const double a = eval_kernel(k, z, n);
    const double b = eval_kernel(k, -z, n);
    if (a != b) even = false;
    if (a < 0.0) nonneg = false;
  }
  rep.checks.push_back({"even", even});
  rep.checks.push_back({"nonnegative", nonneg});

  switch (k.type) {
    case KernelType::PowerLaw:
      break;
    case KernelType::BoundedMeasurable:
    case KernelType::Truncated: {
      bool bounds = true;
      for (const auto& z : pts) {
        const double r = norm(z, n);
        if (k.type == KernelType::Truncated && r > k.r_star) continue;
        const double v = eval_kernel(k, z, n);
        const double ref = std::pow(r, -(n + k.alpha));
        if (v < k.lambda * ref * (1.0 - 1e-12) ||
            v > k.Lambda * ref * (1.0 + 1e-12))
          bounds = false;
      }
      rep.checks.push_back({"comparable", bounds});
      if (k.type == KernelType::Truncated) {
        bool zero = true;
        for (const auto& z : pts) {
          const double r = norm(z, n);
          if (r > k.R_star && eval_kernel(k, z, n) != 0.0) zero = false;
        }
        rep.checks.push_back({"support", zero});
      }
      break;
    }
    case KernelType::Decaying: {
      bool decay = true;
      for (double r = 1.25 * k.R_star; r < 64.0 * k.R_star; r *= 2.0) {
        if (tail_mass(k, r, n) > k.C_D * std::pow(r, -k.theta) * (1.0 + 1e-9))
          decay = false;
      }
      rep.checks.push_back({"tail_decay", decay});
      break;
    }
  }
  return rep;
}

}  // namespace nlab
