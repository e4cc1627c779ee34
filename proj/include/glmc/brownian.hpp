#pragma once

#include <vector>

#include "glmc/manifold.hpp"
#include "glmc/rng.hpp"

namespace glmc {

// One Brownian path in R^d, refinable to dyadic times k*T/2^i via Brownian
// bridge midpoints.  Values B(k T/2^i) are stored, so child increments sum to
// the parent increment exactly.  Midpoint noise is keyed by (seed, level, k):
// a path is a pure function of its seed, regardless of refinement order.
class DyadicBrownianPath {
 public:
  DyadicBrownianPath(double horizon, int dim, std::uint64_t seed)
      : horizon_(horizon), dim_(dim), seed_(seed) {
    if (horizon <= 0.0) throw InvalidInput("brownian path: horizon must be > 0");
    if (dim < 1) throw InvalidInput("brownian path: dim must be >= 1");
    KeyedRng rng(seed_, stream::kBrownianBase);
    levels_.push_back({Eigen::VectorXd::Zero(dim),
                       std::sqrt(horizon) * rng.normal_vector(dim)});
  }

  double horizon() const { return horizon_; }
  int dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }
  int max_level() const { return static_cast<int>(levels_.size()) - 1; }
  double step(int level) const { return horizon_ / static_cast<double>(1L << level); }

  // B(k * T / 2^level)
  const Eigen::VectorXd& value(int level, long k) const {
    check_index(level, k, /*n_points=*/true);
    return levels_[level][k];
  }

  // B((k+1) delta^i) - B(k delta^i)
  Eigen::VectorXd increment(int level, long k) const {
    check_index(level, k, /*n_points=*/false);
    return levels_[level][k + 1] - levels_[level][k];
  }

  // Materialize one more level: midpoints drawn from the bridge law,
  // mean = average of the endpoints, variance delta^i/4 per coordinate.
  void refine() {
    const int i = max_level();
    const long n = 1L << i;
    const double mid_sd = std::sqrt(step(i) / 4.0);
    std::vector<Eigen::VectorXd> fine(2 * n + 1, Eigen::VectorXd());
    for (long k = 0; k < n; ++k) {
      KeyedRng rng(seed_, stream::kBrownianBridge, static_cast<std::uint64_t>(i + 1),
                   static_cast<std::uint64_t>(k));
      fine[2 * k] = levels_[i][k];
      fine[2 * k + 1] =
          0.5 * (levels_[i][k] + levels_[i][k + 1]) + mid_sd * rng.normal_vector(dim_);
    }
    fine[2 * n] = levels_[i][n];
    levels_.push_back(std::move(fine));
  }

  void ensure_level(int level) {
    while (max_level() < level) refine();
  }

 private:
  void check_index(int level, long k, bool n_points) const {
    if (level < 0 || level > max_level())
      throw InvalidInput("brownian path: level not materialized");
    const long n = 1L << level;
    const long hi = n_points ? n : n - 1;
    if (k < 0 || k > hi) throw InvalidInput("brownian path: index out of range");
  }

  double horizon_;
  int dim_;
  std::uint64_t seed_;
  std::vector<std::vector<Eigen::VectorXd>> levels_;
};

// zeta ~ N_x(0, I): standard Gaussian coordinates through an orthonormal
// frame; the distribution does not depend on the frame choice.
inline TangentVector tangent_gaussian(const Point& x, const Frame& f,
                                      KeyedRng& rng) {
  return combine(f, rng.normal_vector(f.size()));
}

}  // namespace glmc
