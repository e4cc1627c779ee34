#include <catch2/catch_amalgamated.hpp>

#include "glmc/manifold.hpp"
#include "glmc/rng.hpp"

using namespace glmc;
using Eigen::VectorXd;

namespace {

VectorXd unit(int n, int i) {
  VectorXd e = VectorXd::Zero(n);
  e(i) = 1.0;
  return e;
}

Point random_sphere_point(const ManifoldSpec& m, KeyedRng& rng) {
  VectorXd z = rng.normal_vector(m.ambient_dim);
  return Point{m, z / z.norm()};
}

Point random_hyperboloid_point(const ManifoldSpec& m, KeyedRng& rng,
                               double radius = 1.5) {
  Point base = make_point(m, unit(m.ambient_dim, 0));
  Frame f = gram_schmidt_frame(base);
  VectorXd c = radius * rng.normal_vector(m.intrinsic_dim) /
               std::sqrt(static_cast<double>(m.intrinsic_dim));
  return exp_map(base, combine(f, c));
}

Point random_point(const ManifoldSpec& m, KeyedRng& rng) {
  switch (m.kind) {
    case ManifoldKind::kSphere:
      return random_sphere_point(m, rng);
    case ManifoldKind::kHyperboloid:
      return random_hyperboloid_point(m, rng);
    default:
      return Point{m, rng.normal_vector(m.ambient_dim)};
  }
}

TangentVector random_tangent(const Point& x, KeyedRng& rng, double scale = 1.0) {
  Frame f = gram_schmidt_frame(x);
  VectorXd c = scale * rng.normal_vector(f.size());
  return combine(f, c);
}

// Oracle: arc length of the numerically integrated geodesic ODE on S^2,
// gamma'' = -|gamma'|^2 gamma in ambient coordinates (RK4).
double sphere_geodesic_ode_length(const Point& x, const TangentVector& v0,
                                  double t_end, int steps) {
  VectorXd p = x.coords, v = v0.coords;
  const double h = t_end / steps;
  double length = 0.0;
  auto acc = [](const VectorXd& pos, const VectorXd& vel) -> VectorXd {
    return -vel.squaredNorm() * pos;
  };
  for (int k = 0; k < steps; ++k) {
    length += h * v.norm();
    VectorXd k1p = v, k1v = acc(p, v);
    VectorXd k2p = v + 0.5 * h * k1v, k2v = acc(p + 0.5 * h * k1p, v + 0.5 * h * k1v);
    VectorXd k3p = v + 0.5 * h * k2v, k3v = acc(p + 0.5 * h * k2p, v + 0.5 * h * k2v);
    VectorXd k4p = v + h * k3v, k4v = acc(p + h * k3p, v + h * k3v);
    p += (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p);
    v += (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return length;
}

}  // namespace

TEST_CASE("sphere exp closed-form cases") {
  auto m = ManifoldSpec::sphere(3);
  Point e1 = make_point(m, unit(3, 0));

  SECTION("quarter great circle") {
    TangentVector v{e1, (M_PI / 2.0) * unit(3, 1)};
    Point y = exp_map(e1, v);
    REQUIRE((y.coords - unit(3, 1)).norm() < 1e-12);
  }
  SECTION("zero vector is identity") {
    Point y = exp_map(e1, zero_tangent(e1));
    REQUIRE((y.coords - e1.coords).norm() == 0.0);
  }
  SECTION("antipode along great circle") {
    TangentVector v{e1, M_PI * unit(3, 1)};
    Point y = exp_map(e1, v);
    REQUIRE((y.coords + e1.coords).norm() < 1e-12);
  }
  SECTION("tangency violation rejected") {
    TangentVector bad{e1, unit(3, 0)};  // parallel to x, not tangent
    REQUIRE_THROWS_AS(exp_map(e1, bad), InvalidInput);
  }
}

TEST_CASE("log closed-form cases") {
  auto m = ManifoldSpec::sphere(3);
  Point e1 = make_point(m, unit(3, 0));
  Point e2 = make_point(m, unit(3, 1));

  TangentVector v = log_map(e1, e2);
  REQUIRE((v.coords - (M_PI / 2.0) * unit(3, 1)).norm() < 1e-12);
  REQUIRE(log_map(e1, e1).coords.norm() == 0.0);

  auto eu = ManifoldSpec::euclidean(4);
  KeyedRng rng(7, 99);
  Point x{eu, rng.normal_vector(4)}, y{eu, rng.normal_vector(4)};
  REQUIRE((log_map(x, y).coords - (y.coords - x.coords)).norm() == 0.0);
}

TEST_CASE("antipodal log falls back deterministically and flags") {
  auto m = ManifoldSpec::sphere(3);
  Point e1 = make_point(m, unit(3, 0));
  Point me1 = make_point(m, -unit(3, 0));
  bool flag = false;
  TangentVector v = log_map(e1, me1, &flag);
  REQUIRE(flag);
  REQUIRE(std::abs(v.norm() - M_PI) < 1e-12);
  // direction is the first gram_schmidt frame vector
  Frame f = gram_schmidt_frame(e1);
  REQUIRE((v.coords / M_PI - f.vectors[0]).norm() < 1e-12);
  // exp of the fallback still reaches the antipode
  Point back = exp_map(e1, v);
  REQUIRE((back.coords - me1.coords).norm() < 1e-9);
}

TEST_CASE("distance basics and geodesic-ODE oracle on S^2") {
  auto m = ManifoldSpec::sphere(3);
  Point e1 = make_point(m, unit(3, 0));
  Point e2 = make_point(m, unit(3, 1));
  REQUIRE(std::abs(geo_distance(e1, e2) - M_PI / 2.0) < 1e-14);
  REQUIRE(geo_distance(e1, e1) == 0.0);

  KeyedRng rng(11, 99);
  for (int trial = 0; trial < 5; ++trial) {
    Point x = random_sphere_point(m, rng);
    Point y = random_sphere_point(m, rng);
    if (geo_distance(x, y) > M_PI - 0.2) continue;
    TangentVector v = log_map(x, y);
    const double arc = sphere_geodesic_ode_length(x, v, 1.0, 4000);
    REQUIRE(std::abs(arc - geo_distance(x, y)) < 1e-6);
  }
}

TEST_CASE("parallel transport closed-form cases") {
  auto m4 = ManifoldSpec::sphere(4);  // S^3
  Point e1 = make_point(m4, unit(4, 0));
  Point e2 = make_point(m4, unit(4, 1));

  SECTION("vector orthogonal to the transport plane is unchanged") {
    TangentVector v{e1, unit(4, 2)};
    TangentVector t = parallel_transport(v, e1, e2);
    REQUIRE((t.coords - unit(4, 2)).norm() < 1e-12);
  }
  SECTION("geodesic velocity transports to geodesic velocity") {
    TangentVector v{e1, unit(4, 1)};
    TangentVector t = parallel_transport(v, e1, e2);
    REQUIRE((t.coords + unit(4, 0)).norm() < 1e-12);
  }
  SECTION("transport to the same point is the identity") {
    TangentVector v{e1, 0.7 * unit(4, 1) + 0.2 * unit(4, 3)};
    TangentVector t = parallel_transport(v, e1, e1);
    REQUIRE((t.coords - v.coords).norm() < 1e-12);
  }
}

TEST_CASE("transport isometry and frame round trip", "[property]") {
  KeyedRng rng(23, 99);
  for (const auto& m : {ManifoldSpec::sphere(4), ManifoldSpec::hyperboloid(4),
                        ManifoldSpec::euclidean(4)}) {
    for (int trial = 0; trial < 50; ++trial) {
      Point x = random_point(m, rng);
      Point y = random_point(m, rng);
      if (m.kind == ManifoldKind::kSphere && geo_distance(x, y) > M_PI - 0.1)
        continue;
      TangentVector u = random_tangent(x, rng);
      TangentVector v = random_tangent(x, rng);
      TangentVector pu = parallel_transport(u, x, y);
      TangentVector pv = parallel_transport(v, x, y);
      REQUIRE(std::abs(metric_dot(m, pu.coords, pv.coords) -
                       metric_dot(m, u.coords, v.coords)) < 1e-8);

      Frame f = gram_schmidt_frame(x);
      Frame fy = transport_frame(f, x, y);
      REQUIRE(fy.orthonormality_residual() < 1e-8);
      Frame back = transport_frame(fy, y, x);
      for (int i = 0; i < f.size(); ++i)
        REQUIRE((back.vectors[i] - f.vectors[i]).norm() < 1e-7);
    }
  }
}

TEST_CASE("exp/log inverse and geodesic speed", "[property]") {
  KeyedRng rng(31, 99);
  for (const auto& m : {ManifoldSpec::sphere(3), ManifoldSpec::sphere(5),
                        ManifoldSpec::hyperboloid(3), ManifoldSpec::euclidean(3)}) {
    for (int trial = 0; trial < 50; ++trial) {
      Point x = random_point(m, rng);
      Point y = random_point(m, rng);
      if (m.kind == ManifoldKind::kSphere && geo_distance(x, y) > M_PI - 0.1)
        continue;
      TangentVector v = log_map(x, y);
      REQUIRE(std::abs(v.norm() - geo_distance(x, y)) < 1e-9);
      Point z = exp_map(x, v);
      REQUIRE(geo_distance(z, y) < 1e-7);

      // constant speed along t -> exp(x, t v)
      TangentVector w = random_tangent(x, rng, 0.4);
      const double t1 = 0.3, t2 = 0.8;
      Point a = exp_map(x, TangentVector{x, t1 * w.coords});
      Point b = exp_map(x, TangentVector{x, t2 * w.coords});
      REQUIRE(std::abs(geo_distance(a, b) - (t2 - t1) * w.norm()) < 1e-6);
    }
  }
}

TEST_CASE("curvature operator") {
  KeyedRng rng(41, 99);

  SECTION("euclidean curvature vanishes") {
    auto m = ManifoldSpec::euclidean(3);
    Point x{m, rng.normal_vector(3)};
    TangentVector u = random_tangent(x, rng), v = random_tangent(x, rng),
                  w = random_tangent(x, rng);
    REQUIRE(curvature_op(u, v, w).coords.norm() == 0.0);
  }
  SECTION("sphere sectional curvature is 1") {
    auto m = ManifoldSpec::sphere(3);
    Point x = random_sphere_point(m, rng);
    Frame f = gram_schmidt_frame(x);
    TangentVector u{x, f.vectors[0]}, v{x, f.vectors[1]};
    TangentVector r = curvature_op(u, v, v);
    REQUIRE(std::abs(metric_dot(m, r.coords, u.coords) - 1.0) < 1e-12);
  }
  SECTION("antisymmetry in the first two slots") {
    for (const auto& m : {ManifoldSpec::sphere(4), ManifoldSpec::hyperboloid(4)}) {
      Point x = random_point(m, rng);
      TangentVector u = random_tangent(x, rng), v = random_tangent(x, rng),
                    w = random_tangent(x, rng);
      TangentVector a = curvature_op(u, v, w), b = curvature_op(v, u, w);
      REQUIRE((a.coords + b.coords).norm() < 1e-10);
    }
  }
  SECTION("sectional curvature bound |<R(u,v)v,u>| <= L_R |u|^2 |v|^2") {
    for (const auto& m : {ManifoldSpec::sphere(4), ManifoldSpec::hyperboloid(4)}) {
      for (int trial = 0; trial < 1000; ++trial) {
        Point x = random_point(m, rng);
        TangentVector u = random_tangent(x, rng), v = random_tangent(x, rng);
        TangentVector r = curvature_op(u, v, v);
        const double sec = std::abs(metric_dot(m, r.coords, u.coords));
        REQUIRE(sec <= m.curvature.l_r * sq(u.norm()) * sq(v.norm()) + 1e-9);
      }
    }
  }
}

TEST_CASE("ricci closed form equals frame trace of curvature_op") {
  KeyedRng rng(43, 99);
  for (const auto& m : {ManifoldSpec::euclidean(3), ManifoldSpec::sphere(3),
                        ManifoldSpec::sphere(5), ManifoldSpec::hyperboloid(3)}) {
    for (int trial = 0; trial < 10; ++trial) {
      Point x = random_point(m, rng);
      TangentVector u = random_tangent(x, rng);
      Frame f = gram_schmidt_frame(x);
      double trace = 0.0;
      for (int i = 0; i < f.size(); ++i) {
        TangentVector e{x, f.vectors[i]};
        TangentVector r = curvature_op(u, e, e);
        trace += metric_dot(m, r.coords, u.coords);
      }
      REQUIRE(std::abs(ricci(u) - trace) < 1e-8);
    }
  }
  // unit-vector spot values: S^2 -> 1, H^2 -> -1, euclidean -> 0
  {
    auto s = ManifoldSpec::sphere(3);
    Point x = make_point(s, unit(3, 0));
    TangentVector u{x, unit(3, 1)};
    REQUIRE(std::abs(ricci(u) - 1.0) < 1e-12);
  }
  {
    auto h = ManifoldSpec::hyperboloid(3);
    Point x = make_point(h, unit(3, 0));
    TangentVector u{x, unit(3, 1)};
    REQUIRE(std::abs(ricci(u) + 1.0) < 1e-12);
  }
}

TEST_CASE("gram_schmidt_frame determinism and span") {
  auto m = ManifoldSpec::sphere(4);
  Point e1 = make_point(m, unit(4, 0));
  Frame f = gram_schmidt_frame(e1);
  REQUIRE(f.size() == 3);
  // at e_1 the frame spans {e_2, e_3, e_4}
  for (int i = 0; i < 3; ++i)
    REQUIRE((f.vectors[i] - unit(4, i + 1)).norm() < 1e-12);
  REQUIRE(f.orthonormality_residual() < 1e-10);

  Frame g = gram_schmidt_frame(e1);
  for (int i = 0; i < 3; ++i)
    REQUIRE((f.vectors[i] - g.vectors[i]).norm() == 0.0);
}

TEST_CASE("coords_in_frame and combine are mutually inverse") {
  KeyedRng rng(53, 99);
  for (const auto& m : {ManifoldSpec::sphere(4), ManifoldSpec::hyperboloid(4)}) {
    Point x = random_point(m, rng);
    Frame f = gram_schmidt_frame(x);

    Eigen::VectorXd e0 = VectorXd::Zero(f.size());
    e0(0) = 1.0;
    REQUIRE((combine(f, e0).coords - f.vectors[0]).norm() < 1e-12);

    TangentVector v = random_tangent(x, rng);
    VectorXd c = coords_in_frame(v, f);
    REQUIRE(std::abs(c.norm() - v.norm()) < 1e-8);
    TangentVector w = combine(f, c);
    REQUIRE((w.coords - v.coords).norm() < 1e-8);

    REQUIRE(coords_in_frame(zero_tangent(x), f).norm() == 0.0);
  }
}

TEST_CASE("point and tangent constraint validation") {
  auto m = ManifoldSpec::sphere(3);
  REQUIRE_THROWS_AS(make_point(m, 2.0 * unit(3, 0)), InvalidInput);
  auto h = ManifoldSpec::hyperboloid(3);
  VectorXd bad(3);
  bad << -1.0, 0.0, 0.0;  // lower sheet
  REQUIRE_THROWS_AS(make_point(h, bad), InvalidInput);
  Point x = make_point(h, unit(3, 0));
  REQUIRE_THROWS_AS(make_tangent(x, unit(3, 0)), InvalidInput);
}
