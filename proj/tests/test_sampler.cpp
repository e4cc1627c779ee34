#include <catch2/catch_amalgamated.hpp>

#include "glmc/sampler.hpp"

using namespace glmc;
using Eigen::VectorXd;

namespace {
VectorXd unit(int n, int i) {
  VectorXd e = VectorXd::Zero(n);
  e(i) = 1.0;
  return e;
}
}  // namespace

TEST_CASE("em_step closed-form cases") {
  auto m = ManifoldSpec::sphere(3);
  Point e1 = make_point(m, unit(3, 0));

  SECTION("no drift, no noise stays put") {
    Point y = em_step(e1, zero_tangent(e1), 0.5, zero_tangent(e1));
    REQUIRE((y.coords - e1.coords).norm() == 0.0);
  }
  SECTION("pure drift quarter circle") {
    TangentVector beta{e1, (M_PI / 2.0) * unit(3, 1)};
    Point y = em_step(e1, beta, 1.0, zero_tangent(e1));
    REQUIRE((y.coords - unit(3, 1)).norm() < 1e-12);
  }
  SECTION("euclidean case is exactly x + delta beta + sqrt(delta) zeta") {
    auto eu = ManifoldSpec::euclidean(2);
    Point x{eu, unit(2, 0)};
    TangentVector beta{x, 2.0 * unit(2, 1)};
    TangentVector zeta{x, -1.5 * unit(2, 0)};
    const double delta = 0.25;
    Point y = em_step(x, beta, delta, zeta);
    VectorXd expect = x.coords + delta * beta.coords + std::sqrt(delta) * zeta.coords;
    REQUIRE((y.coords - expect).norm() == 0.0);
  }
}

TEST_CASE("run_langevin basics") {
  auto p = gaussian_potential(3, 1.0);
  EMConfig cfg;
  cfg.delta = 0.01;
  cfg.steps = 0;
  cfg.seed = 9;
  cfg.initial = Point{p.manifold, unit(3, 0)};

  SECTION("K = 0 returns only the initial point") {
    Trajectory t = run_langevin(cfg, p);
    REQUIRE(t.points.size() == 1);
    REQUIRE((t.points[0].coords - cfg.initial.coords).norm() == 0.0);
  }
  SECTION("same seed gives identical trajectories") {
    cfg.steps = 200;
    Trajectory a = run_langevin(cfg, p);
    Trajectory b = run_langevin(cfg, p);
    for (size_t i = 0; i < a.points.size(); ++i)
      REQUIRE((a.points[i].coords - b.points[i].coords).norm() == 0.0);
  }
  SECTION("stepsize guard rejects large delta unless overridden") {
    cfg.delta = 1.0;  // bound is 1/(16 * 0.5) = 0.125
    cfg.steps = 1;
    REQUIRE_THROWS_AS(run_langevin(cfg, p), InvalidInput);
    cfg.override_stability_guard = true;
    REQUIRE_NOTHROW(run_langevin(cfg, p));
  }
  SECTION("points stay on the manifold") {
    auto vp = vmf_potential(3, 2.0, unit(3, 2));
    EMConfig c2;
    c2.delta = 0.01;
    c2.steps = 500;
    c2.seed = 11;
    c2.initial = make_point(vp.manifold, unit(3, 0));
    Trajectory t = run_langevin(c2, vp);
    for (const auto& pt : t.points) REQUIRE(pt.constraint_residual() <= 1e-8);
  }
}

TEST_CASE("langevin stationary second moment matches the discrete-chain law",
          "[montecarlo]") {
  // euclidean Gaussian c=1: the linear chain x' = (1 - delta c/2) x + sqrt(delta) z
  // has stationary variance delta / (1 - (1 - delta c/2)^2) per coordinate.
  const double c = 1.0, delta = 0.01;
  const int d = 3;
  auto p = gaussian_potential(d, c);
  EMConfig cfg;
  cfg.delta = delta;
  cfg.steps = 200000;  // autocorrelation time ~ 2/(delta c) = 200 steps
  cfg.seed = 21;
  cfg.initial = Point{p.manifold, VectorXd::Zero(d)};
  Trajectory t = run_langevin(cfg, p);
  double sum = 0.0;
  long count = 0;
  for (size_t k = t.points.size() / 2; k < t.points.size(); ++k) {
    sum += t.points[k].coords.squaredNorm();
    ++count;
  }
  const double observed = sum / count;
  const double chain_var = delta / (1.0 - sq(1.0 - delta * c / 2.0));
  REQUIRE(std::abs(observed - d * chain_var) < 0.1 * d);
  REQUIRE(std::abs(observed - d) < 0.1 * d);  // SDE stationary value
}

TEST_CASE("run_sgld") {
  SECTION("N = 1 with the same seed matches run_langevin exactly") {
    auto o = gaussian_finite_sum_oracle(3, 1.0, 1, 0.7);
    EMConfig cfg;
    cfg.delta = 0.02;
    cfg.steps = 300;
    cfg.seed = 31;
    cfg.initial = Point{o.mean.manifold, unit(3, 1)};
    Trajectory a = run_sgld(cfg, o);
    Trajectory b = run_langevin(cfg, o.mean);
    REQUIRE(a.points.size() == b.points.size());
    for (size_t i = 0; i < a.points.size(); ++i)
      REQUIRE((a.points[i].coords - b.points[i].coords).norm() == 0.0);
  }
  SECTION("reproducible under a fixed seed") {
    auto o = gaussian_finite_sum_oracle(2, 1.0, 5, 1.0);
    EMConfig cfg;
    cfg.delta = 0.02;
    cfg.steps = 100;
    cfg.seed = 37;
    cfg.initial = Point{o.mean.manifold, unit(2, 0)};
    Trajectory a = run_sgld(cfg, o);
    Trajectory b = run_sgld(cfg, o);
    for (size_t i = 0; i < a.points.size(); ++i)
      REQUIRE((a.points[i].coords - b.points[i].coords).norm() == 0.0);
  }
  SECTION("SGLD stationary second moment exceeds the exact chain's by O(delta sigma^2)",
          "[montecarlo]") {
    auto o = gaussian_finite_sum_oracle(2, 1.0, 4, 2.0);
    std::vector<double> gaps;
    for (double delta : {0.08, 0.02}) {
      EMConfig cfg;
      cfg.delta = delta;
      cfg.steps = 60000;
      cfg.initial = Point{o.mean.manifold, VectorXd::Zero(2)};
      double sgld_m2 = 0.0, exact_m2 = 0.0;
      long count = 0;
      for (std::uint64_t seed : {101, 102, 103}) {
        cfg.seed = seed;
        Trajectory s = run_sgld(cfg, o);
        Trajectory e = run_langevin(cfg, o.mean);
        for (size_t k = s.points.size() / 2; k < s.points.size(); ++k) {
          sgld_m2 += s.points[k].coords.squaredNorm();
          exact_m2 += e.points[k].coords.squaredNorm();
          ++count;
        }
      }
      gaps.push_back((sgld_m2 - exact_m2) / count);
    }
    REQUIRE(gaps[0] > 0.0);          // positive excess variance
    REQUIRE(gaps[1] < gaps[0]);      // shrinking with delta
  }
}
