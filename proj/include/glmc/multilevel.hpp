#pragma once

#include <vector>

#include "glmc/parallel.hpp"
#include "glmc/sampler.hpp"

namespace glmc {

// The dyadic family of Euler-Maruyama chains x^i_k driven by one Brownian
// path.  Level i has 2^i + 1 points with stepsize delta^i = T / 2^i; frames
// evolve by "rolling without slipping" along the level's own steps at odd
// nodes and by synchronous re-anchoring to the coarser level at even nodes.
struct MultilevelRun {
  DyadicBrownianPath path;
  std::vector<std::vector<Point>> points;  // [level][node]
  std::vector<std::vector<Frame>> frames;  // [level][node], E^i_k
  double horizon = 0.0;
  const Potential* potential = nullptr;
  bool antipodal_flag = false;  // a degenerate transport occurred somewhere
};

inline MultilevelRun build_multilevel(double horizon, int i_max, const Potential& p,
                                      const Point& x0, std::uint64_t seed) {
  if (i_max < 0 || i_max > 14)
    throw InvalidInput("build_multilevel: i_max must be in [0, 14]");
  const int d = p.manifold.intrinsic_dim;
  MultilevelRun run{DyadicBrownianPath(horizon, d, seed), {}, {}, horizon, &p};
  run.path.ensure_level(i_max);

  const Frame base_frame = gram_schmidt_frame(x0);
  bool flag = false;

  // level 0: a single step of size T
  {
    std::vector<Point> pts{x0};
    std::vector<Frame> frs{base_frame};
    TangentVector noise = combine(base_frame, run.path.increment(0, 0));
    TangentVector u{x0, horizon * drift(p, x0).coords + noise.coords};
    pts.push_back(exp_map(x0, u));
    frs.push_back(transport_frame(base_frame, x0, pts[1], &flag));
    run.antipodal_flag = run.antipodal_flag || flag;
    run.points.push_back(std::move(pts));
    run.frames.push_back(std::move(frs));
  }

  for (int lvl = 1; lvl <= i_max; ++lvl) {
    const double dt = run.path.step(lvl);
    const long n = 1L << lvl;
    std::vector<Point> pts(n + 1, x0);
    std::vector<Frame> frs(n + 1, base_frame);
    const auto& coarse_pts = run.points[lvl - 1];
    const auto& coarse_frs = run.frames[lvl - 1];

    for (long k = 0; 2 * k < n; ++k) {
      const Point& x_even = pts[2 * k];
      const Frame& e_even = frs[2 * k];
      // odd node: step with the even frame, then roll the frame along the step
      {
        TangentVector noise = combine(e_even, run.path.increment(lvl, 2 * k));
        TangentVector u{x_even, dt * drift(p, x_even).coords + noise.coords};
        pts[2 * k + 1] = exp_map(x_even, u);
        frs[2 * k + 1] =
            transport_frame(e_even, x_even, pts[2 * k + 1], &flag);
        run.antipodal_flag = run.antipodal_flag || flag;
      }
      // next even node: step with the rolled frame, then re-anchor the frame
      // by transporting the coarse frame E^{i}_{k+1} from x^{i}_{k+1}
      {
        const Point& x_odd = pts[2 * k + 1];
        TangentVector noise = combine(frs[2 * k + 1], run.path.increment(lvl, 2 * k + 1));
        TangentVector u{x_odd, dt * drift(p, x_odd).coords + noise.coords};
        pts[2 * k + 2] = exp_map(x_odd, u);
        frs[2 * k + 2] = transport_frame(coarse_frs[k + 1], coarse_pts[k + 1],
                                         pts[2 * k + 2], &flag);
        run.antipodal_flag = run.antipodal_flag || flag;
      }
    }
    run.points.push_back(std::move(pts));
    run.frames.push_back(std::move(frs));
  }
  return run;
}

// Geodesic interpolation x^i(t) between grid nodes: the partial step reuses
// the level's own drift and Brownian increment.
inline Point interpolate(const MultilevelRun& run, int level, double t) {
  if (t < 0.0 || t > run.horizon + 1e-12)
    throw InvalidInput("interpolate: t outside [0, T]");
  const double dt = run.path.step(level);
  long k = static_cast<long>(std::floor(t / dt));
  const long n = 1L << level;
  if (k >= n) k = n - 1;
  const double frac = (t - k * dt) / dt;
  if (frac <= 0.0) return run.points[level][k];
  const Point& x = run.points[level][k];
  TangentVector noise = combine(run.frames[level][k], run.path.increment(level, k));
  TangentVector u{x, frac * (dt * drift(*run.potential, x).coords + noise.coords)};
  return exp_map(x, u);
}

// Re-derives every point and frame from the stored Brownian path and asserts
// the recursion reproduces the stored run; returns the worst deviation.
inline double replay_verification(const MultilevelRun& run) {
  MultilevelRun fresh = build_multilevel(run.horizon, run.path.max_level(),
                                         *run.potential, run.points[0][0],
                                         run.path.seed());
  double worst = 0.0;
  for (size_t i = 0; i < run.points.size(); ++i)
    for (size_t k = 0; k < run.points[i].size(); ++k) {
      worst = std::max(worst,
                       (run.points[i][k].coords - fresh.points[i][k].coords).norm());
      for (int j = 0; j < run.frames[i][k].size(); ++j)
        worst = std::max(worst, (run.frames[i][k].vectors[j] -
                                 fresh.frames[i][k].vectors[j]).norm());
    }
  return worst;
}

// ---------------------------------------------------------------------------
// Error-scaling experiments
// ---------------------------------------------------------------------------

struct ErrorTableRow {
  double t_or_delta = 0.0;
  int level = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  long reps = 0;
};

// Monte Carlo estimate of E[d(x^0(T), x^{i_max}(T))^2] per stepsize T,
// treating the deepest level as the SDE endpoint x(T).
inline std::vector<ErrorTableRow> one_step_error_table(
    const Potential& p, const Point& x0, const std::vector<double>& t_list,
    int i_max, int reps, std::uint64_t master_seed, int threads = 1) {
  std::vector<ErrorTableRow> rows;
  for (size_t ti = 0; ti < t_list.size(); ++ti) {
    const double horizon = t_list[ti];
    std::vector<double> errs(reps);
    parallel_for(reps, threads, [&](long r) {
      KeyedRng seeder(master_seed, stream::kExperiment, ti, r);
      MultilevelRun run = build_multilevel(horizon, i_max, p, x0, seeder.next_u64());
      errs[r] = sq(geo_distance(run.points[0].back(), run.points[i_max].back()));
    });
    double sum = 0.0, sum_sq = 0.0;
    for (double e : errs) {
      sum += e;
      sum_sq += e * e;
    }
    const double mean = sum / reps;
    const double var = std::max(0.0, sum_sq / reps - mean * mean);
    rows.push_back({horizon, i_max, mean, std::sqrt(var / reps), reps});
  }
  return rows;
}

// E[max over the finer grid of d(x^i(t), x^{i+1}(t))^2] for each adjacent
// pair of levels; expected geometric decay ~ 2^{-i}.
inline std::vector<ErrorTableRow> adjacent_level_error_table(
    const Potential& p, const Point& x0, double horizon, int i_lo, int i_hi,
    int reps, std::uint64_t master_seed, int threads = 1) {
  std::vector<std::vector<double>> errs(reps, std::vector<double>(i_hi + 1, 0.0));
  parallel_for(reps, threads, [&](long r) {
    KeyedRng seeder(master_seed, stream::kExperiment, 0, r);
    MultilevelRun run = build_multilevel(horizon, i_hi + 1, p, x0, seeder.next_u64());
    for (int i = i_lo; i <= i_hi; ++i) {
      const double dt_fine = run.path.step(i + 1);
      const long n_fine = 1L << (i + 1);
      double worst = 0.0;
      for (long j = 0; j <= n_fine; ++j) {
        const Point& fine = run.points[i + 1][j];
        Point coarse = (j % 2 == 0) ? run.points[i][j / 2]
                                    : interpolate(run, i, j * dt_fine);
        worst = std::max(worst, sq(geo_distance(fine, coarse)));
      }
      errs[r][i] = worst;
    }
  });
  std::vector<ErrorTableRow> rows;
  for (int i = i_lo; i <= i_hi; ++i) {
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
      sum += errs[r][i];
      sum_sq += errs[r][i] * errs[r][i];
    }
    const double mean = sum / reps;
    const double var = std::max(0.0, sum_sq / reps - mean * mean);
    rows.push_back({horizon, i, mean, std::sqrt(var / reps), reps});
  }
  return rows;
}

}  // namespace glmc
