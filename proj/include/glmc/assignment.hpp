#pragma once

#include <vector>

#include <Eigen/Core>

#include "glmc/common.hpp"

namespace glmc {

// Exact solution of the square assignment problem by shortest augmenting
// paths with dual potentials, O(n^3).  The duals certify optimality through
// complementary slackness: cost(i,j) - u(i) - v(j) >= 0 with equality on
// every matched pair.
struct AssignmentResult {
  std::vector<int> row_to_col;
  double total_cost = 0.0;
  std::vector<double> u, v;  // dual potentials

  double worst_slackness(const Eigen::MatrixXd& cost) const {
    const int n = static_cast<int>(row_to_col.size());
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double reduced = cost(i, j) - u[i] - v[j];
        worst = std::max(worst, -reduced);  // feasibility violation
      }
      worst = std::max(worst, std::abs(cost(i, row_to_col[i]) - u[i] - v[row_to_col[i]]));
    }
    return worst;
  }
};

inline AssignmentResult solve_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw InvalidInput("assignment: cost matrix must be square");
  const double kInf = std::numeric_limits<double>::infinity();

  // 1-indexed arrays; p[j] = row matched to column j, p[0] = current row.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  AssignmentResult out;
  out.row_to_col.assign(n, -1);
  out.u.assign(n, 0.0);
  out.v.assign(n, 0.0);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) out.row_to_col[p[j] - 1] = j - 1;
  for (int i = 1; i <= n; ++i) out.u[i - 1] = u[i];
  for (int j = 1; j <= n; ++j) out.v[j - 1] = v[j];
  for (int i = 0; i < n; ++i) out.total_cost += cost(i, out.row_to_col[i]);
  return out;
}

}  // namespace glmc
