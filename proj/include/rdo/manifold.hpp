#pragma once

#include <Eigen/Dense>

#include <limits>
#include <string>

#include "rdo/random.hpp"

namespace rdo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ManifoldKind { Sphere, Hyperboloid, Euclidean };

const char *to_string(ManifoldKind kind);
ManifoldKind parse_manifold_kind(const std::string &name);

/// A point in ambient coordinates. Validity is relative to a Manifold.
struct Point {
  Vector coords;
};

/// A tangent vector stored in ambient coordinates together with its anchor.
struct TangentVector {
  Point base;
  Vector coords;

  TangentVector scaled(double a) const { return {base, a * coords}; }
};

/// Constant-curvature model spaces: the unit sphere S^d in R^{d+1}, the
/// hyperboloid model of H^d in Minkowski space R^{1,d}, and R^d.
///
/// All geodesic operations are closed form. Results of exp and transport are
/// re-projected onto the manifold/tangent space to keep roundoff from drifting
/// across long simulations.
class Manifold {
public:
  Manifold(ManifoldKind kind, int dim);

  static Manifold sphere(int dim) { return {ManifoldKind::Sphere, dim}; }
  static Manifold hyperboloid(int dim) {
    return {ManifoldKind::Hyperboloid, dim};
  }
  static Manifold euclidean(int dim) { return {ManifoldKind::Euclidean, dim}; }

  ManifoldKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int ambient_dim() const { return kind_ == ManifoldKind::Euclidean ? dim_ : dim_ + 1; }
  double k_min() const;
  double k_max() const;
  double injectivity_radius() const;
  std::string name() const;

  // Construction and validation.
  Point point(Vector coords) const;
  Point origin() const;
  TangentVector tangent(const Point &base, Vector coords) const;
  TangentVector zero(const Point &base) const;
  TangentVector project_to_tangent(const Point &base, const Vector &ambient) const;
  bool is_point(const Point &x, double tol = 1e-10) const;
  bool is_tangent(const TangentVector &v, double tol = 1e-10) const;

  // Geometry.
  Point exp(const TangentVector &v) const;
  /// Endpoint of the geodesic with initial velocity v followed for unit time,
  /// for any |v|. Identical to exp inside the injectivity radius; on the
  /// sphere longer steps wrap around the great circle.
  Point geodesic_step(const TangentVector &v) const;
  TangentVector log(const Point &x, const Point &y) const;
  /// acc += weight * Log_x(y) in ambient coordinates, with no temporaries.
  void accumulate_log(const Point &x, const Point &y, double weight, Vector &acc) const;
  double dist(const Point &x, const Point &y) const;
  double inner(const TangentVector &u, const TangentVector &v) const;
  double norm(const TangentVector &v) const;
  TangentVector parallel_transport(const TangentVector &v, const Point &to) const;

  /// Columns form an orthonormal basis of T_x M (ambient_dim x dim).
  Matrix tangent_basis(const Point &x) const;

  TangentVector sample_unit_tangent(const Point &x, Rng &rng) const;

  /// Generalized sine sn_K(t) for the chart's constant curvature.
  double sn(double t) const;

private:
  double ambient_inner(const Vector &a, const Vector &b) const;
  Vector renormalize_point(Vector x) const;
  Vector renormalize_tangent(const Vector &base, Vector v) const;
  bool same_base(const Point &a, const Point &b) const;

  ManifoldKind kind_;
  int dim_;
};

/// Closed geodesic ball {y : d(center, y) <= radius}.
struct GeodesicBall {
  Point center;
  double radius;
};

/// Validates radius > 0 and, on positively curved charts, radius < pi/2 so
/// the ball is uniquely geodesically convex.
GeodesicBall make_ball(const Manifold &m, Point center, double radius);

bool ball_contains(const Manifold &m, const GeodesicBall &ball, const Point &x,
                   double tol = 1e-12);

/// Metric projection onto a geodesic ball: radial retraction toward the
/// center when x lies outside.
Point project_ball(const Manifold &m, const GeodesicBall &ball, const Point &x);

/// {Exp_p((1 - tau) Log_p y) : y in ball} for a ball centered at p.
GeodesicBall shrink_ball(const GeodesicBall &ball, double tau);

/// Draws from the normalized Riemannian volume measure restricted to the
/// ball: uniform direction, radius density proportional to sn(t)^(d-1).
Point sample_uniform_ball(const Manifold &m, const GeodesicBall &ball, Rng &rng);

} // namespace rdo
