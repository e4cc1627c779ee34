#pragma once

#include <string>
#include <vector>

#include "glmc/assignment.hpp"
#include "glmc/manifold.hpp"
#include "glmc/parallel.hpp"

namespace glmc {

struct SampleCloud {
  ManifoldSpec manifold;
  std::vector<Point> points;
  std::string label;

  void validate() const {
    for (const auto& p : points)
      if (p.constraint_residual() > kPointTol)
        throw InvalidInput("sample cloud: point off the manifold");
  }
};

struct W1Result {
  double value = 0.0;
  std::vector<int> assignment;
  double cost_matrix_checksum = 0.0;
  double dual_slackness = 0.0;  // complementary-slackness certificate
};

namespace detail {

inline Eigen::MatrixXd pairwise_costs(const SampleCloud& a, const SampleCloud& b,
                                      bool squared, int threads) {
  if (!(a.manifold == b.manifold))
    throw InvalidInput("wasserstein: clouds on different manifolds");
  if (a.points.size() != b.points.size())
    throw InvalidInput("wasserstein: clouds must have equal size");
  const long n = static_cast<long>(a.points.size());
  if (n == 0) throw InvalidInput("wasserstein: empty clouds");
  if (n > 2048) throw InvalidInput("wasserstein: n must be <= 2048");
  Eigen::MatrixXd cost(n, n);
  parallel_for(n, threads, [&](long i) {
    for (long j = 0; j < n; ++j) {
      const double d = geo_distance(a.points[i], b.points[j]);
      cost(i, j) = squared ? d * d : d;
    }
  });
  return cost;
}

inline W1Result emd(const SampleCloud& a, const SampleCloud& b, bool squared,
                    int threads) {
  Eigen::MatrixXd cost = pairwise_costs(a, b, squared, threads);
  AssignmentResult sol = solve_assignment(cost);
  W1Result out;
  out.assignment = sol.row_to_col;
  out.value = sol.total_cost / static_cast<double>(cost.rows());
  out.cost_matrix_checksum = cost.sum();
  out.dual_slackness = sol.worst_slackness(cost);
  return out;
}

}  // namespace detail

// Empirical W1 between equal-size clouds: exact optimal assignment on the
// geodesic-distance cost matrix, mean matched distance.
inline W1Result wasserstein1(const SampleCloud& a, const SampleCloud& b,
                             int threads = 1) {
  return detail::emd(a, b, /*squared=*/false, threads);
}

// Squared-distance cost; returns the mean squared matched distance (W2^2).
inline double wasserstein2_sq(const SampleCloud& a, const SampleCloud& b,
                              int threads = 1) {
  return detail::emd(a, b, /*squared=*/true, threads).value;
}

}  // namespace glmc
