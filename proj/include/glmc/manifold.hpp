#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Core>

#include "glmc/common.hpp"

namespace glmc {

enum class ManifoldKind { kEuclidean, kSphere, kHyperboloid };

// Sectional-curvature magnitude bound L_R, curvature-derivative bound L_R',
// and the Ricci lower-bound constant L_Ric (Ric(u,u) >= -L_Ric * |u|^2).
struct CurvatureBounds {
  double l_r = 0.0;
  double l_r_prime = 0.0;
  double l_ric = 0.0;
};

struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::kEuclidean;
  int ambient_dim = 1;
  int intrinsic_dim = 1;
  CurvatureBounds curvature;

  static ManifoldSpec euclidean(int n) {
    if (n < 1) throw InvalidInput("euclidean: ambient_dim must be >= 1");
    return ManifoldSpec{ManifoldKind::kEuclidean, n, n, {0.0, 0.0, 0.0}};
  }
  // Unit sphere S^{n-1} embedded in R^n.
  static ManifoldSpec sphere(int n) {
    if (n < 2) throw InvalidInput("sphere: ambient_dim must be >= 2");
    const double d = n - 1;
    return ManifoldSpec{ManifoldKind::kSphere, n, n - 1, {1.0, 0.0, -(d - 1.0)}};
  }
  // Minkowski-model hyperboloid H^{n-1}: <x,x>_M = -1, x_0 > 0.
  static ManifoldSpec hyperboloid(int n) {
    if (n < 2) throw InvalidInput("hyperboloid: ambient_dim must be >= 2");
    const double d = n - 1;
    return ManifoldSpec{ManifoldKind::kHyperboloid, n, n - 1, {1.0, 0.0, d - 1.0}};
  }

  bool operator==(const ManifoldSpec& o) const {
    return kind == o.kind && ambient_dim == o.ambient_dim;
  }
};

// Metric inner product in ambient coordinates (Minkowski on the hyperboloid).
inline double metric_dot(const ManifoldSpec& m, const Eigen::VectorXd& u,
                         const Eigen::VectorXd& v) {
  double s = u.dot(v);
  if (m.kind == ManifoldKind::kHyperboloid) s -= 2.0 * u(0) * v(0);
  return s;
}

inline double metric_norm(const ManifoldSpec& m, const Eigen::VectorXd& u) {
  const double s = metric_dot(m, u, u);
  return s <= 0.0 ? 0.0 : std::sqrt(s);
}

struct Point {
  ManifoldSpec manifold;
  Eigen::VectorXd coords;

  double constraint_residual() const {
    switch (manifold.kind) {
      case ManifoldKind::kEuclidean:
        return 0.0;
      case ManifoldKind::kSphere:
        return std::abs(coords.norm() - 1.0);
      case ManifoldKind::kHyperboloid:
        return std::abs(metric_dot(manifold, coords, coords) + 1.0);
    }
    return 0.0;
  }
};

struct TangentVector {
  Point base;
  Eigen::VectorXd coords;

  double tangency_residual() const {
    switch (base.manifold.kind) {
      case ManifoldKind::kEuclidean:
        return 0.0;
      default:
        return std::abs(metric_dot(base.manifold, base.coords, coords));
    }
  }
  double norm() const { return metric_norm(base.manifold, coords); }
};

inline Point make_point(const ManifoldSpec& m, const Eigen::VectorXd& coords) {
  Point p{m, coords};
  if (coords.size() != m.ambient_dim)
    throw InvalidInput("point: coordinate length does not match ambient_dim");
  if (m.kind == ManifoldKind::kHyperboloid && coords(0) <= 0.0)
    throw InvalidInput("hyperboloid point: x_0 must be positive");
  if (p.constraint_residual() > kPointTol)
    throw InvalidInput("point: constraint residual exceeds tolerance");
  return p;
}

// Orthogonal projection of an ambient vector onto T_x M.
inline Eigen::VectorXd project_tangent(const Point& x, const Eigen::VectorXd& v) {
  switch (x.manifold.kind) {
    case ManifoldKind::kEuclidean:
      return v;
    case ManifoldKind::kSphere:
      return v - x.coords.dot(v) * x.coords;
    case ManifoldKind::kHyperboloid:
      // <x,x>_M = -1, so the projection adds <x,v>_M x.
      return v + metric_dot(x.manifold, x.coords, v) * x.coords;
  }
  return v;
}

inline TangentVector make_tangent(const Point& x, const Eigen::VectorXd& coords) {
  TangentVector v{x, coords};
  if (coords.size() != x.manifold.ambient_dim)
    throw InvalidInput("tangent: coordinate length does not match ambient_dim");
  if (v.tangency_residual() > kTangentTol)
    throw InvalidInput("tangent: tangency residual exceeds tolerance");
  return v;
}

inline TangentVector zero_tangent(const Point& x) {
  return TangentVector{x, Eigen::VectorXd::Zero(x.manifold.ambient_dim)};
}

// Re-projection to the constraint set; kills float drift after exp/transport
// and perturbs by machine-epsilon-scale amounts only.
inline Point reproject(const Point& x) {
  Point out = x;
  switch (x.manifold.kind) {
    case ManifoldKind::kEuclidean:
      break;
    case ManifoldKind::kSphere:
      out.coords /= out.coords.norm();
      break;
    case ManifoldKind::kHyperboloid: {
      const double s = -metric_dot(x.manifold, out.coords, out.coords);
      out.coords /= std::sqrt(s);
      break;
    }
  }
  return out;
}

inline TangentVector reproject(const TangentVector& v) {
  return TangentVector{v.base, project_tangent(v.base, v.coords)};
}

inline void require_same_manifold(const Point& x, const Point& y) {
  if (!(x.manifold == y.manifold))
    throw InvalidInput("points live on different manifolds");
}

inline void require_based_at(const TangentVector& v, const Point& x) {
  require_same_manifold(v.base, x);
  if ((v.base.coords - x.coords).norm() > 1e-12)
    throw InvalidInput("tangent vector based at a different point");
}

// ---------------------------------------------------------------------------
// Exponential map, logarithm, distance, parallel transport
// ---------------------------------------------------------------------------

inline Point exp_map(const Point& x, const TangentVector& v) {
  require_based_at(v, x);
  if (v.tangency_residual() > kTangentTol)
    throw InvalidInput("exp: tangency violation");
  const ManifoldSpec& m = x.manifold;
  switch (m.kind) {
    case ManifoldKind::kEuclidean:
      return Point{m, x.coords + v.coords};
    case ManifoldKind::kSphere: {
      const double theta = v.coords.norm();
      if (theta < 1e-14) return reproject(Point{m, x.coords + v.coords});
      Eigen::VectorXd c =
          std::cos(theta) * x.coords + (std::sin(theta) / theta) * v.coords;
      return reproject(Point{m, c});
    }
    case ManifoldKind::kHyperboloid: {
      const double theta = metric_norm(m, v.coords);
      if (theta < 1e-14) return reproject(Point{m, x.coords + v.coords});
      Eigen::VectorXd c =
          std::cosh(theta) * x.coords + (std::sinh(theta) / theta) * v.coords;
      return reproject(Point{m, c});
    }
  }
  return x;
}

inline double geo_distance(const Point& x, const Point& y) {
  require_same_manifold(x, y);
  const ManifoldSpec& m = x.manifold;
  switch (m.kind) {
    case ManifoldKind::kEuclidean:
      return (x.coords - y.coords).norm();
    case ManifoldKind::kSphere: {
      // arccos(<x,y>) evaluated through the chord, which stays
      // well-conditioned at both ends of [0, pi].
      if (x.coords.dot(y.coords) >= 0.0)
        return 2.0 * std::asin(clamp(0.5 * (x.coords - y.coords).norm(), 0.0, 1.0));
      return M_PI - 2.0 * std::asin(clamp(0.5 * (x.coords + y.coords).norm(), 0.0, 1.0));
    }
    case ManifoldKind::kHyperboloid: {
      // arccosh(-<x,y>_M) via cosh(t) - 1 = 2 sinh^2(t/2).
      const Eigen::VectorXd diff = x.coords - y.coords;
      const double s = metric_dot(m, diff, diff);
      return 2.0 * std::asinh(0.5 * std::sqrt(s > 0.0 ? s : 0.0));
    }
  }
  return 0.0;
}

// Deterministic orthonormal frame: project the ambient standard basis onto
// T_x M, Gram-Schmidt in the manifold metric, drop the near-zero vector.
struct Frame;
inline Frame gram_schmidt_frame(const Point& x);

struct Frame {
  Point base;
  std::vector<Eigen::VectorXd> vectors;  // d tangent coordinate vectors

  int size() const { return static_cast<int>(vectors.size()); }

  double orthonormality_residual() const {
    double worst = 0.0;
    for (int i = 0; i < size(); ++i)
      for (int j = i; j < size(); ++j) {
        const double g = metric_dot(base.manifold, vectors[i], vectors[j]);
        worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
      }
    return worst;
  }
};

inline Frame gram_schmidt_frame(const Point& x) {
  const ManifoldSpec& m = x.manifold;
  Frame f{x, {}};
  f.vectors.reserve(m.intrinsic_dim);
  for (int j = 0; j < m.ambient_dim && f.size() < m.intrinsic_dim; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m.ambient_dim);
    e(j) = 1.0;
    Eigen::VectorXd v = project_tangent(x, e);
    for (const auto& u : f.vectors) v -= metric_dot(m, u, v) * u;
    const double n = metric_norm(m, v);
    if (n < 1e-8) continue;  // ambient direction collapsed onto the normal
    f.vectors.push_back(v / n);
  }
  if (f.size() != m.intrinsic_dim)
    throw InvalidInput("gram_schmidt_frame: failed to span the tangent space");
  return f;
}

// log_map: inverse of exp along the minimizing geodesic.  On the sphere an
// antipodal pair has no unique geodesic; we return the deterministic fallback
// direction (first gram_schmidt_frame vector scaled by pi) and set the flag.
inline TangentVector log_map(const Point& x, const Point& y,
                             bool* nonunique_geodesic = nullptr) {
  require_same_manifold(x, y);
  if (nonunique_geodesic) *nonunique_geodesic = false;
  const ManifoldSpec& m = x.manifold;
  switch (m.kind) {
    case ManifoldKind::kEuclidean:
      return TangentVector{x, y.coords - x.coords};
    case ManifoldKind::kSphere: {
      const double c = clamp(x.coords.dot(y.coords), -1.0, 1.0);
      if (c <= -1.0 + 1e-12) {
        if (nonunique_geodesic) *nonunique_geodesic = true;
        Frame f = gram_schmidt_frame(x);
        return TangentVector{x, M_PI * f.vectors[0]};
      }
      const double theta = std::acos(c);
      Eigen::VectorXd w = y.coords - c * x.coords;
      const double wn = w.norm();
      if (wn < 1e-14) return zero_tangent(x);
      return TangentVector{x, (theta / wn) * w};
    }
    case ManifoldKind::kHyperboloid: {
      const double c = -metric_dot(m, x.coords, y.coords);
      const double theta = std::acosh(c < 1.0 ? 1.0 : c);
      Eigen::VectorXd w = y.coords - c * x.coords;
      const double wn = metric_norm(m, w);
      if (wn < 1e-14 || theta < 1e-14)
        return TangentVector{x, project_tangent(x, w)};
      return TangentVector{x, (theta / wn) * w};
    }
  }
  return zero_tangent(x);
}

// Parallel transport of v from x to y along their minimizing geodesic.
inline TangentVector parallel_transport(const TangentVector& v, const Point& x,
                                        const Point& y,
                                        bool* nonunique_geodesic = nullptr) {
  require_based_at(v, x);
  require_same_manifold(x, y);
  if (nonunique_geodesic) *nonunique_geodesic = false;
  const ManifoldSpec& m = x.manifold;
  switch (m.kind) {
    case ManifoldKind::kEuclidean:
      return TangentVector{y, v.coords};
    case ManifoldKind::kSphere: {
      const double c = x.coords.dot(y.coords);
      if (c <= -1.0 + 1e-12) {
        // Transport along the deterministic fallback geodesic from log_map:
        // the component along the geodesic direction flips sign.
        if (nonunique_geodesic) *nonunique_geodesic = true;
        bool flag = false;
        TangentVector dir = log_map(x, y, &flag);
        Eigen::VectorXd u = dir.coords / dir.coords.norm();
        Eigen::VectorXd t = v.coords - 2.0 * u.dot(v.coords) * u;
        return TangentVector{y, project_tangent(y, t)};
      }
      Eigen::VectorXd t =
          v.coords - (y.coords.dot(v.coords) / (1.0 + c)) * (x.coords + y.coords);
      return TangentVector{y, project_tangent(y, t)};
    }
    case ManifoldKind::kHyperboloid: {
      const double c = metric_dot(m, x.coords, y.coords);  // = -cosh(theta)
      Eigen::VectorXd t =
          v.coords +
          (metric_dot(m, y.coords, v.coords) / (1.0 - c)) * (x.coords + y.coords);
      return TangentVector{y, project_tangent(Point{m, y.coords}, t)};
    }
  }
  return v;
}

inline Frame transport_frame(const Frame& f, const Point& x, const Point& y,
                             bool* nonunique_geodesic = nullptr) {
  Frame out{y, {}};
  out.vectors.reserve(f.vectors.size());
  bool any_flag = false;
  for (const auto& vec : f.vectors) {
    bool flag = false;
    TangentVector t = parallel_transport(TangentVector{f.base, vec}, x, y, &flag);
    any_flag = any_flag || flag;
    out.vectors.push_back(t.coords);
  }
  if (nonunique_geodesic) *nonunique_geodesic = any_flag;
  return out;
}

// ---------------------------------------------------------------------------
// Curvature
// ---------------------------------------------------------------------------

// Riemann tensor R(u,v)w.  Constant curvature K: K * (<v,w>u - <u,w>v).
inline TangentVector curvature_op(const TangentVector& u, const TangentVector& v,
                                  const TangentVector& w) {
  require_based_at(v, u.base);
  require_based_at(w, u.base);
  const ManifoldSpec& m = u.base.manifold;
  double k = 0.0;
  switch (m.kind) {
    case ManifoldKind::kEuclidean:
      k = 0.0;
      break;
    case ManifoldKind::kSphere:
      k = 1.0;
      break;
    case ManifoldKind::kHyperboloid:
      k = -1.0;
      break;
  }
  if (k == 0.0) return zero_tangent(u.base);
  Eigen::VectorXd r = k * (metric_dot(m, v.coords, w.coords) * u.coords -
                           metric_dot(m, u.coords, w.coords) * v.coords);
  return TangentVector{u.base, r};
}

// Ricci curvature Ric(u,u); closed form, equals the frame trace of R(u,e)e.
inline double ricci(const TangentVector& u) {
  const ManifoldSpec& m = u.base.manifold;
  const double n2 = metric_dot(m, u.coords, u.coords);
  const double d = m.intrinsic_dim;
  switch (m.kind) {
    case ManifoldKind::kEuclidean:
      return 0.0;
    case ManifoldKind::kSphere:
      return (d - 1.0) * n2;
    case ManifoldKind::kHyperboloid:
      return -(d - 1.0) * n2;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Frame coordinates ("v o F" shorthand)
// ---------------------------------------------------------------------------

inline Eigen::VectorXd coords_in_frame(const TangentVector& v, const Frame& f) {
  require_based_at(v, f.base);
  Eigen::VectorXd c(f.size());
  for (int i = 0; i < f.size(); ++i)
    c(i) = metric_dot(f.base.manifold, v.coords, f.vectors[i]);
  return c;
}

inline TangentVector combine(const Frame& f, const Eigen::VectorXd& c) {
  if (c.size() != f.size())
    throw InvalidInput("combine: coordinate length does not match frame size");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(f.base.manifold.ambient_dim);
  for (int i = 0; i < f.size(); ++i) v += c(i) * f.vectors[i];
  return TangentVector{f.base, v};
}

}  // namespace glmc
