#pragma once

#include <vector>

#include "glmc/lyapunov.hpp"
#include "glmc/sampler.hpp"

namespace glmc {

enum class CouplingVariant { kSynchronous, kReflection };

struct CouplingKind {
  CouplingVariant variant = CouplingVariant::kSynchronous;
  double reflection_threshold = 1e-6;  // reflection switches off below this
};

// Two chains with frames related by parallel transport along the current
// minimizing geodesic from x to y; re-derived every step to avoid drift.
struct CoupledState {
  Point x, y;
  Frame frame_x, frame_y;
  bool degenerate_geodesic = false;

  double frame_coupling_residual() const {
    bool flag = false;
    Frame expect = transport_frame(frame_x, x, y, &flag);
    double worst = 0.0;
    for (int i = 0; i < expect.size(); ++i)
      worst = std::max(worst, (expect.vectors[i] - frame_y.vectors[i]).norm());
    return worst;
  }
};

inline CoupledState make_coupled_state(const Point& x, const Point& y) {
  CoupledState s;
  s.x = x;
  s.y = y;
  s.frame_x = gram_schmidt_frame(x);
  bool flag = false;
  s.frame_y = transport_frame(s.frame_x, x, y, &flag);
  s.degenerate_geodesic = flag;
  return s;
}

namespace detail {

inline CoupledState coupled_step(const CoupledState& s, const Potential& p,
                                 double delta, const Eigen::VectorXd& xi_x,
                                 const Eigen::VectorXd& xi_y) {
  const double sqrt_delta = std::sqrt(delta);
  TangentVector zeta_x = combine(s.frame_x, xi_x);
  TangentVector zeta_y = combine(s.frame_y, xi_y);
  Point x_new = em_step(s.x, drift(p, s.x), delta, zeta_x);
  Point y_new = em_step(s.y, drift(p, s.y), delta, zeta_y);
  (void)sqrt_delta;
  CoupledState out = make_coupled_state(x_new, y_new);
  out.degenerate_geodesic = out.degenerate_geodesic || s.degenerate_geodesic;
  return out;
}

}  // namespace detail

// Both chains share the Gaussian coordinates through the transported frames.
inline CoupledState synchronous_step(const CoupledState& s, const Potential& p,
                                     double delta, KeyedRng& rng) {
  Eigen::VectorXd xi = rng.normal_vector(s.frame_x.size());
  return detail::coupled_step(s, p, delta, xi, xi);
}

// Kendall-Cranston reflection: y's coordinates are (I - 2 nu nu^T) xi where
// nu is the unit geodesic direction in frame_x (zeroed within the threshold,
// where the coupling degenerates to synchronous).
inline CoupledState reflection_step(const CoupledState& s, const Potential& p,
                                    double delta, double epsilon, KeyedRng& rng) {
  Eigen::VectorXd xi = rng.normal_vector(s.frame_x.size());
  Eigen::VectorXd xi_y = xi;
  if (geo_distance(s.x, s.y) > epsilon) {
    TangentVector gamma0 = log_map(s.x, s.y);
    Eigen::VectorXd nu = coords_in_frame(gamma0, s.frame_x);
    const double n = nu.norm();
    if (n > 0.0) {
      nu /= n;
      xi_y = xi - 2.0 * nu.dot(xi) * nu;
    }
  }
  return detail::coupled_step(s, p, delta, xi, xi_y);
}

struct CoupledSeries {
  std::vector<double> times;
  std::vector<double> distance;
  std::vector<double> lyapunov;  // f(d) under the configured params
  bool degenerate_geodesic = false;
};

inline CoupledSeries run_coupled(const CouplingKind& kind, const EMConfig& cfg,
                                 const Potential& p, const Point& x0,
                                 const Point& y0,
                                 const LyapunovFn* lyapunov = nullptr) {
  validate_config(cfg, p.manifold, p.lipschitz_l_beta_prime);
  CoupledSeries out;
  KeyedRng rng(cfg.seed, stream::kChainNoise);
  CoupledState s = make_coupled_state(x0, y0);
  auto record = [&](double t) {
    const double d = geo_distance(s.x, s.y);
    out.times.push_back(t);
    out.distance.push_back(d);
    out.lyapunov.push_back(lyapunov ? lyapunov->f(d) : d);
  };
  record(0.0);
  for (long k = 0; k < cfg.steps; ++k) {
    s = (kind.variant == CouplingVariant::kSynchronous)
            ? synchronous_step(s, p, cfg.delta, rng)
            : reflection_step(s, p, cfg.delta, kind.reflection_threshold, rng);
    if (!s.x.coords.allFinite() || !s.y.coords.allFinite())
      throw NumericalBlowup(k);
    record((k + 1) * cfg.delta);
  }
  out.degenerate_geodesic = s.degenerate_geodesic;
  return out;
}

struct RateFit {
  double rate = 0.0;      // alpha-hat: decay rate of E[metric] per unit time
  double stderr_rate = 0.0;
};

// Least-squares slope of log E[metric] vs time over the second half of the
// series (drops the transient), negated: positive = contraction.
inline RateFit contraction_rate_fit(const std::vector<double>& times,
                                    const std::vector<double>& mean_metric) {
  if (times.size() != mean_metric.size() || times.size() < 4)
    throw InvalidInput("contraction_rate_fit: need at least four points");
  const size_t lo = times.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long n = 0;
  std::vector<double> xs, ys;
  for (size_t i = lo; i < times.size(); ++i) {
    if (mean_metric[i] <= 0.0) continue;
    xs.push_back(times[i]);
    ys.push_back(std::log(mean_metric[i]));
    sx += xs.back();
    sy += ys.back();
    sxx += xs.back() * xs.back();
    sxy += xs.back() * ys.back();
    ++n;
  }
  if (n < 2) return {0.0, 0.0};
  const double vx = sxx - sx * sx / n;
  if (vx <= 0.0) return {0.0, 0.0};
  const double slope = (sxy - sx * sy / n) / vx;
  // residual-based standard error of the slope
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0.0;
  for (long i = 0; i < n; ++i) ss_res += sq(ys[i] - intercept - slope * xs[i]);
  const double se = n > 2 ? std::sqrt(ss_res / (n - 2) / vx) : 0.0;
  return {-slope, se};
}

}  // namespace glmc
