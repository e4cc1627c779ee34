#pragma once

#include <vector>

#include "glmc/sampler.hpp"

namespace glmc {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares on (ln x, ln y); the exponent check for the error-scaling
// experiments.
inline SlopeFit loglog_slope(const std::vector<double>& xs,
                             const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw InvalidInput("loglog_slope: need at least two points");
  const int n = static_cast<int>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    if (xs[i] <= 0.0 || ys[i] <= 0.0)
      throw InvalidInput("loglog_slope: data must be positive");
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  SlopeFit fit;
  if (vx <= 0.0) throw InvalidInput("loglog_slope: degenerate abscissae");
  fit.slope = cxy / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r_squared = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
  return fit;
}

// Fraction of trajectories whose running max distance to x_star exceeds r.
inline double tail_exceedance(const std::vector<Trajectory>& trajs,
                              const Point& x_star, double r) {
  if (trajs.empty()) throw InvalidInput("tail_exceedance: no trajectories");
  long hits = 0;
  for (const auto& t : trajs) {
    for (const auto& p : t.points) {
      if (geo_distance(p, x_star) > r) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(trajs.size());
}

// Displayed bound of the subgaussian SGLD tail lemma:
//   32 K delta m exp(2 L_beta'^2 R^2/(d+sigma^2)
//                    + 64 L_R (d+sigma^2)/m - m r^2/(256 (d+sigma^2))).
inline double sgld_tail_bound(long steps, double delta, double m,
                              double l_beta_prime, double l_r, double radius,
                              int dim, double sigma, double r) {
  const double dv = static_cast<double>(dim) + sigma * sigma;
  const double exponent = 2.0 * sq(l_beta_prime) * sq(radius) / dv +
                          64.0 * l_r * dv / m - m * r * r / (256.0 * dv);
  return 32.0 * static_cast<double>(steps) * delta * m * std::exp(exponent);
}

// Displayed L2 bound under Lipschitz continuity:
//   4 exp(8 K delta L_beta' + K delta L_R s2 + K delta^2 L_R L0^2)
//     * (2 K delta s2 + 8 K^2 delta^2 L0^2),   s2 = E|xi|^2.
inline double lipschitz_l2_bound(long steps, double delta, double l_beta_prime,
                                 double l_r, double l0, double sigma_xi_sq) {
  const double k = static_cast<double>(steps);
  return 4.0 *
         std::exp(8.0 * k * delta * l_beta_prime + k * delta * l_r * sigma_xi_sq +
                  k * delta * delta * l_r * l0 * l0) *
         (2.0 * k * delta * sigma_xi_sq + 8.0 * k * k * delta * delta * l0 * l0);
}

// Displayed L4 bound under dissipativity:
//   e^{-K delta m} d0^4 + 2^24 L_R^2 L_beta'^8 s8 / m^12
//     + 64 L_beta'^2 R^4 / m^2 + 128 s4 / m^2,  s4 = E|xi|^4, s8 = s4^2.
inline double dissipative_l4_bound(long steps, double delta, double m,
                                   double l_beta_prime, double l_r, double radius,
                                   double sigma_xi_4, double d0_4) {
  const double k = static_cast<double>(steps);
  return std::exp(-k * delta * m) * d0_4 +
         std::pow(2.0, 24) * sq(l_r) * std::pow(l_beta_prime, 8) * sq(sigma_xi_4) /
             std::pow(m, 12) +
         64.0 * sq(l_beta_prime) * std::pow(radius, 4) / sq(m) +
         128.0 * sigma_xi_4 / sq(m);
}

struct MomentStats {
  double mean_d2 = 0.0;
  double stderr_d2 = 0.0;
  double mean_d4 = 0.0;
  double stderr_d4 = 0.0;
  long count = 0;
};

// Ensemble moments of d(x_K, x_star) at the final time.
inline MomentStats moment_stats(const std::vector<Trajectory>& trajs,
                                const Point& x_star) {
  if (trajs.empty()) throw InvalidInput("moment_stats: no trajectories");
  MomentStats out;
  double s2 = 0, s4 = 0, s4_sq = 0, s2_sq = 0;
  for (const auto& t : trajs) {
    const double d = geo_distance(t.points.back(), x_star);
    s2 += d * d;
    s2_sq += std::pow(d, 4);
    s4 += std::pow(d, 4);
    s4_sq += std::pow(d, 8);
    ++out.count;
  }
  const double n = static_cast<double>(out.count);
  out.mean_d2 = s2 / n;
  out.mean_d4 = s4 / n;
  out.stderr_d2 = std::sqrt(std::max(0.0, s2_sq / n - sq(out.mean_d2)) / n);
  out.stderr_d4 = std::sqrt(std::max(0.0, s4_sq / n - sq(out.mean_d4)) / n);
  return out;
}

}  // namespace glmc
