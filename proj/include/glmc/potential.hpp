#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "glmc/manifold.hpp"
#include "glmc/rng.hpp"

namespace glmc {

// Target potential h with Riemannian gradient; the sampler drift is
// beta = -1/2 grad h.
struct Potential {
  ManifoldSpec manifold;
  std::string name;
  std::function<double(const Point&)> h;
  std::function<TangentVector(const Point&)> riemannian_grad;
  double lipschitz_l_beta_prime = 0.0;  // declared Lipschitz bound for beta
  std::optional<Point> stationary_point;
};

inline TangentVector drift(const Potential& p, const Point& x) {
  TangentVector g = p.riemannian_grad(x);
  return reproject(TangentVector{x, -0.5 * g.coords});
}

// -------------------------------------------------------------------------
// Built-in targets
// -------------------------------------------------------------------------

// h(x) = c |x|^2 / 2 on R^n; pi* = N(0, I/c).
inline Potential gaussian_potential(int ambient_dim, double c) {
  auto m = ManifoldSpec::euclidean(ambient_dim);
  Potential p;
  p.manifold = m;
  p.name = "gaussian";
  p.h = [c](const Point& x) { return 0.5 * c * x.coords.squaredNorm(); };
  p.riemannian_grad = [c](const Point& x) {
    return TangentVector{x, c * x.coords};
  };
  p.lipschitz_l_beta_prime = 0.5 * c;
  p.stationary_point = Point{m, Eigen::VectorXd::Zero(ambient_dim)};
  return p;
}

// von Mises-Fisher on S^{n-1}: h(x) = -kappa <x, mu>.
inline Potential vmf_potential(int ambient_dim, double kappa,
                               const Eigen::VectorXd& mu) {
  auto m = ManifoldSpec::sphere(ambient_dim);
  Eigen::VectorXd mu_unit = mu / mu.norm();
  Potential p;
  p.manifold = m;
  p.name = "vmf";
  p.h = [kappa, mu_unit](const Point& x) { return -kappa * x.coords.dot(mu_unit); };
  p.riemannian_grad = [kappa, mu_unit](const Point& x) {
    Eigen::VectorXd g = -kappa * mu_unit;
    return TangentVector{x, project_tangent(x, g)};
  };
  // |grad U| <= kappa and |hess U| <= kappa give L_beta' = (L1+L2)/2 = kappa.
  p.lipschitz_l_beta_prime = kappa;
  p.stationary_point = make_point(m, mu_unit);
  return p;
}

// Mixture of vMF densities (nonconvex target): h = -log sum_i w_i e^{k_i <x,mu_i>}.
struct VmfComponent {
  double weight;
  double kappa;
  Eigen::VectorXd mu;
};

inline Potential vmf_mixture_potential(int ambient_dim,
                                       const std::vector<VmfComponent>& comps) {
  auto m = ManifoldSpec::sphere(ambient_dim);
  if (comps.empty()) throw ConfigError("vmf mixture: empty component list");
  std::vector<VmfComponent> cs = comps;
  double kmax = 0.0;
  for (auto& c : cs) {
    c.mu /= c.mu.norm();
    kmax = std::max(kmax, c.kappa);
  }
  auto logits = [cs](const Point& x) {
    Eigen::VectorXd l(cs.size());
    for (size_t i = 0; i < cs.size(); ++i)
      l(i) = std::log(cs[i].weight) + cs[i].kappa * x.coords.dot(cs[i].mu);
    return l;
  };
  Potential p;
  p.manifold = m;
  p.name = "vmf-mixture";
  p.h = [logits](const Point& x) {
    Eigen::VectorXd l = logits(x);
    const double lmax = l.maxCoeff();
    return -(lmax + std::log((l.array() - lmax).exp().sum()));
  };
  p.riemannian_grad = [cs, logits](const Point& x) {
    Eigen::VectorXd l = logits(x);
    const double lmax = l.maxCoeff();
    Eigen::ArrayXd w = (l.array() - lmax).exp();
    w /= w.sum();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.manifold.ambient_dim);
    for (size_t i = 0; i < cs.size(); ++i) g -= w(i) * cs[i].kappa * cs[i].mu;
    return TangentVector{x, project_tangent(x, g)};
  };
  // crude but safe: softmax gradient adds at most a kmax^2 covariance term
  p.lipschitz_l_beta_prime = 0.5 * (kmax + 2.0 * kmax * kmax) + 0.5 * kmax;
  return p;
}

// h(x) = (c/2) d(x, x*)^2 on the hyperboloid (negative-Ricci regime).
// grad h = -c log_x(x*).  The declared Lipschitz constant holds on the
// working ball d(x, x*) <= 6 (hess of d^2/2 is bounded by t coth t there).
inline Potential hyperboloid_quadratic_potential(int ambient_dim, double c,
                                                 const Point& center) {
  Potential p;
  p.manifold = center.manifold;
  p.name = "hyperboloid-quadratic";
  Point x_star = center;
  p.h = [c, x_star](const Point& x) {
    return 0.5 * c * sq(geo_distance(x, x_star));
  };
  p.riemannian_grad = [c, x_star](const Point& x) {
    TangentVector l = log_map(x, x_star);
    return TangentVector{x, -c * l.coords};
  };
  p.lipschitz_l_beta_prime = 0.5 * c * 6.03;
  p.stationary_point = x_star;
  return p;
}

inline Potential zero_potential(const ManifoldSpec& m) {
  Potential p;
  p.manifold = m;
  p.name = "zero";
  p.h = [](const Point&) { return 0.0; };
  p.riemannian_grad = [](const Point& x) { return zero_tangent(x); };
  p.lipschitz_l_beta_prime = 0.0;
  return p;
}

// -------------------------------------------------------------------------
// Stochastic drift oracle (finite-sum SGLD model)
// -------------------------------------------------------------------------

// h = (1/N) sum_i h_i with uniform component sampling; sigma bounds the
// per-component drift deviation from the mean drift.
struct StochasticGradOracle {
  std::vector<Potential> components;
  Potential mean;  // the exact-gradient target
  double sigma = 0.0;
};

inline TangentVector stochastic_drift(const StochasticGradOracle& o,
                                      const Point& x, KeyedRng& component_rng) {
  if (o.components.empty()) throw ConfigError("stochastic oracle: no components");
  const std::uint64_t j = component_rng.uniform_index(o.components.size());
  return drift(o.components[j], x);
}

// Components h_i(x) = c |x - mu_i|^2 / 2 with sum_i mu_i = 0,
// so the mean potential is the centered Gaussian up to a constant.
inline StochasticGradOracle gaussian_finite_sum_oracle(int ambient_dim, double c,
                                                       int n_components,
                                                       double spread) {
  if (n_components < 1) throw ConfigError("finite-sum oracle: N must be >= 1");
  StochasticGradOracle o;
  o.mean = gaussian_potential(ambient_dim, c);
  auto m = o.mean.manifold;
  double max_norm = 0.0;
  for (int i = 0; i < n_components; ++i) {
    // deterministic centers on coordinate axes, paired so they sum to zero
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(ambient_dim);
    if (n_components > 1) {
      const int axis = (i / 2) % ambient_dim;
      mu(axis) = (i % 2 == 0 ? spread : -spread);
      if (n_components % 2 == 1 && i == n_components - 1) mu.setZero();
    }
    max_norm = std::max(max_norm, mu.norm());
    Potential comp;
    comp.manifold = m;
    comp.name = "gaussian-component";
    comp.h = [c, mu](const Point& x) {
      return 0.5 * c * (x.coords - mu).squaredNorm();
    };
    comp.riemannian_grad = [c, mu](const Point& x) {
      return TangentVector{x, c * (x.coords - mu)};
    };
    comp.lipschitz_l_beta_prime = 0.5 * c;
    o.components.push_back(std::move(comp));
  }
  o.sigma = 0.5 * c * max_norm;
  return o;
}

// Components -kappa <x, mu_i> on the sphere whose directions average to mu.
inline StochasticGradOracle vmf_finite_sum_oracle(int ambient_dim, double kappa,
                                                  const Eigen::VectorXd& mu,
                                                  int n_components,
                                                  double spread) {
  StochasticGradOracle o;
  Eigen::VectorXd mu_unit = mu / mu.norm();
  auto m = ManifoldSpec::sphere(ambient_dim);
  std::vector<Eigen::VectorXd> dirs;
  double max_dev = 0.0;
  for (int i = 0; i < n_components; ++i) {
    Eigen::VectorXd di = mu_unit;
    if (n_components > 1) {
      const int axis = (i / 2) % ambient_dim;
      Eigen::VectorXd t = Eigen::VectorXd::Zero(ambient_dim);
      t(axis) = (i % 2 == 0 ? spread : -spread);
      if (n_components % 2 == 1 && i == n_components - 1) t.setZero();
      di = mu_unit + t;
    }
    dirs.push_back(di);
  }
  Eigen::VectorXd mean_dir = Eigen::VectorXd::Zero(ambient_dim);
  for (const auto& di : dirs) mean_dir += di / static_cast<double>(n_components);
  for (const auto& di : dirs) max_dev = std::max(max_dev, (di - mean_dir).norm());

  for (const auto& di : dirs) {
    Potential comp;
    comp.manifold = m;
    comp.name = "vmf-component";
    comp.h = [kappa, di](const Point& x) { return -kappa * x.coords.dot(di); };
    comp.riemannian_grad = [kappa, di](const Point& x) {
      return TangentVector{x, project_tangent(x, Eigen::VectorXd(-kappa * di))};
    };
    comp.lipschitz_l_beta_prime = kappa * di.norm();
    o.components.push_back(std::move(comp));
  }
  // mean potential: h(x) = -kappa <x, mean_dir>
  Potential mean;
  mean.manifold = m;
  mean.name = "vmf-mean";
  mean.h = [kappa, mean_dir](const Point& x) {
    return -kappa * x.coords.dot(mean_dir);
  };
  mean.riemannian_grad = [kappa, mean_dir](const Point& x) {
    return TangentVector{x, project_tangent(x, Eigen::VectorXd(-kappa * mean_dir))};
  };
  mean.lipschitz_l_beta_prime = kappa * mean_dir.norm() + kappa * max_dev;
  mean.stationary_point = make_point(m, Eigen::VectorXd(mean_dir / mean_dir.norm()));
  o.mean = std::move(mean);
  o.sigma = 0.5 * kappa * max_dev;  // projection is a contraction
  return o;
}

// -------------------------------------------------------------------------
// Empirical verification of the dissipativity / Lipschitz constants
// -------------------------------------------------------------------------

struct DissipativityParams {
  std::optional<double> m;  // contraction rate beyond radius R (absent if none)
  double q = 0.0;           // expansion bound inside R
  double r_radius = 0.0;
  bool m_unconstrained = false;  // no sampled pair reaches distance >= R
};

// Draw a probe point; pair distributions are part of the certificate, so the
// sampler is pluggable (default: uniform sphere / standard normal / radius-2
// hyperboloid ball).
using PointSampler = std::function<Point(KeyedRng&)>;

inline PointSampler default_point_sampler(const ManifoldSpec& m) {
  switch (m.kind) {
    case ManifoldKind::kSphere:
      return [m](KeyedRng& rng) {
        Eigen::VectorXd z = rng.normal_vector(m.ambient_dim);
        return Point{m, z / z.norm()};
      };
    case ManifoldKind::kHyperboloid:
      return [m](KeyedRng& rng) {
        Eigen::VectorXd e0 = Eigen::VectorXd::Zero(m.ambient_dim);
        e0(0) = 1.0;
        Point base = make_point(m, e0);
        Frame f = gram_schmidt_frame(base);
        Eigen::VectorXd c = rng.normal_vector(m.intrinsic_dim);
        return exp_map(base, combine(f, c));
      };
    default:
      return [m](KeyedRng& rng) {
        return Point{m, 2.0 * rng.normal_vector(m.ambient_dim)};
      };
  }
}

// rho(x,y) = <P_{y->x} beta(y) - beta(x), gamma'(0)> / d(x,y)^2.
inline double dissipativity_ratio(const Potential& p, const Point& x,
                                  const Point& y) {
  const double dist = geo_distance(x, y);
  if (dist < 1e-10) return 0.0;
  TangentVector bx = drift(p, x);
  TangentVector by = drift(p, y);
  TangentVector by_at_x = parallel_transport(by, y, x);
  TangentVector gamma0 = log_map(x, y);
  return metric_dot(x.manifold, by_at_x.coords - bx.coords, gamma0.coords) /
         sq(dist);
}

// q_hat = max rho over sampled pairs; m_hat(R) = -max rho over pairs with
// d >= R, scanned over a grid of R.  Empirical lower-bound certificate only.
inline DissipativityParams estimate_dissipativity(
    const Potential& p, int n_pairs, KeyedRng& rng,
    const PointSampler& sampler = nullptr, int r_grid = 32) {
  PointSampler draw = sampler ? sampler : default_point_sampler(p.manifold);
  std::vector<double> dists(n_pairs), rhos(n_pairs);
  double d_max = 0.0;
  for (int i = 0; i < n_pairs; ++i) {
    Point x = draw(rng);
    Point y = draw(rng);
    dists[i] = geo_distance(x, y);
    rhos[i] = dissipativity_ratio(p, x, y);
    d_max = std::max(d_max, dists[i]);
  }
  DissipativityParams out;
  out.q = -std::numeric_limits<double>::infinity();
  for (double r : rhos) out.q = std::max(out.q, r);

  const double diameter =
      p.manifold.kind == ManifoldKind::kSphere ? M_PI : d_max * (1.0 + 1e-9);
  for (int g = 0; g <= r_grid; ++g) {
    const double radius = diameter * g / r_grid;
    double worst = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int i = 0; i < n_pairs; ++i) {
      if (dists[i] >= radius) {
        any = true;
        worst = std::max(worst, rhos[i]);
      }
    }
    if (!any) {
      // no sampled pair beyond this radius: any m is admissible here
      out.r_radius = radius;
      out.m_unconstrained = true;
      out.m.reset();
      return out;
    }
    if (-worst > 0.0) {
      out.m = -worst;
      out.r_radius = radius;
      return out;
    }
  }
  out.r_radius = diameter;
  out.m.reset();
  return out;
}

// max over probes of |P_{y->x} beta(y) - beta(x)| / d(x,y) for small
// separations d in [1e-3, 1e-1].
inline double check_lipschitz(const Potential& p, int n_probes, KeyedRng& rng,
                              const PointSampler& sampler = nullptr) {
  PointSampler draw = sampler ? sampler : default_point_sampler(p.manifold);
  double worst = 0.0;
  for (int i = 0; i < n_probes; ++i) {
    Point x = draw(rng);
    Frame f = gram_schmidt_frame(x);
    Eigen::VectorXd dir = rng.normal_vector(f.size());
    dir /= dir.norm();
    const double eps = rng.uniform(1e-3, 1e-1);
    Point y = exp_map(x, combine(f, Eigen::VectorXd(eps * dir)));
    const double dist = geo_distance(x, y);
    if (dist < 1e-12) continue;
    TangentVector by_at_x = parallel_transport(drift(p, y), y, x);
    const double gap = metric_norm(x.manifold, by_at_x.coords - drift(p, x).coords);
    worst = std::max(worst, gap / dist);
  }
  return worst;
}

}  // namespace glmc
