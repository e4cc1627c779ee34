#pragma once

#include <optional>
#include <vector>

#include "glmc/brownian.hpp"
#include "glmc/potential.hpp"

namespace glmc {

struct EMConfig {
  double delta = 0.0;
  long steps = 0;
  std::uint64_t seed = 0;
  Point initial;
  bool record_frames = false;
  // The stability guard rejects delta > min(1/(16 L_beta'), 1/(16 L_R d));
  // scans that explore stepsize ranges set this on purpose.
  bool override_stability_guard = false;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Point> points;
  std::vector<Frame> frames;  // populated when record_frames is set
};

inline double stability_stepsize_bound(const ManifoldSpec& m, double l_beta_prime) {
  double bound = std::numeric_limits<double>::infinity();
  if (l_beta_prime > 0.0) bound = std::min(bound, 1.0 / (16.0 * l_beta_prime));
  if (m.curvature.l_r > 0.0)
    bound = std::min(bound, 1.0 / (16.0 * m.curvature.l_r * m.intrinsic_dim));
  return bound;
}

inline void validate_config(const EMConfig& cfg, const ManifoldSpec& m,
                            double l_beta_prime) {
  if (cfg.delta <= 0.0) throw InvalidInput("sampler: stepsize must be > 0");
  if (cfg.steps < 0) throw InvalidInput("sampler: steps must be >= 0");
  if (!cfg.override_stability_guard &&
      cfg.delta > stability_stepsize_bound(m, l_beta_prime))
    throw InvalidInput("sampler: stepsize exceeds the stability bound; "
                       "set override_stability_guard to force");
}

// One geometric Euler-Maruyama step: Exp_x(delta * beta + sqrt(delta) * zeta).
inline Point em_step(const Point& x, const TangentVector& beta_val, double delta,
                     const TangentVector& zeta) {
  require_based_at(beta_val, x);
  require_based_at(zeta, x);
  TangentVector u{x, delta * beta_val.coords + std::sqrt(delta) * zeta.coords};
  return exp_map(x, u);
}

namespace detail {

template <typename DriftFn>
Trajectory run_chain(const EMConfig& cfg, const ManifoldSpec& m, DriftFn&& drift_at) {
  Trajectory out;
  out.times.reserve(cfg.steps + 1);
  out.points.reserve(cfg.steps + 1);
  Point x = cfg.initial;
  out.times.push_back(0.0);
  out.points.push_back(x);
  KeyedRng noise(cfg.seed, stream::kChainNoise);
  for (long k = 0; k < cfg.steps; ++k) {
    Frame f = gram_schmidt_frame(x);
    if (cfg.record_frames) out.frames.push_back(f);
    TangentVector beta_val = drift_at(x, k);
    TangentVector zeta = tangent_gaussian(x, f, noise);
    x = em_step(x, beta_val, cfg.delta, zeta);
    if (!x.coords.allFinite()) throw NumericalBlowup(k);
    out.times.push_back((k + 1) * cfg.delta);
    out.points.push_back(x);
  }
  if (cfg.record_frames) out.frames.push_back(gram_schmidt_frame(x));
  return out;
}

}  // namespace detail

inline Trajectory run_langevin(const EMConfig& cfg, const Potential& p) {
  validate_config(cfg, p.manifold, p.lipschitz_l_beta_prime);
  return detail::run_chain(cfg, p.manifold,
                           [&](const Point& x, long) { return drift(p, x); });
}

// SGLD: the drift is a fresh uniformly-sampled component each step.  The
// component stream is separate from the noise stream, so with N = 1 the
// trajectory is identical to run_langevin under the same seed.
inline Trajectory run_sgld(const EMConfig& cfg, const StochasticGradOracle& o) {
  if (o.components.empty()) throw ConfigError("run_sgld: empty component list");
  validate_config(cfg, o.mean.manifold, o.mean.lipschitz_l_beta_prime);
  KeyedRng component(cfg.seed, stream::kSgldComponent);
  return detail::run_chain(cfg, o.mean.manifold, [&](const Point& x, long) {
    return stochastic_drift(o, x, component);
  });
}

}  // namespace glmc
