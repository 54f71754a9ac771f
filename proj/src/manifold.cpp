#include "rdo/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rdo/error.hpp"

namespace rdo {

namespace {

constexpr double kPi = std::numbers::pi;

// Closest approach to the antipode that log/transport accept on the sphere.
constexpr double kAntipodalMargin = 1e-9;

std::string describe(const Vector &v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

} // namespace

const char *to_string(ManifoldKind kind) {
  switch (kind) {
  case ManifoldKind::Sphere: return "sphere";
  case ManifoldKind::Hyperboloid: return "hyperboloid";
  case ManifoldKind::Euclidean: return "euclidean";
  }
  return "unknown";
}

ManifoldKind parse_manifold_kind(const std::string &name) {
  if (name == "sphere") return ManifoldKind::Sphere;
  if (name == "hyperboloid") return ManifoldKind::Hyperboloid;
  if (name == "euclidean") return ManifoldKind::Euclidean;
  throw Error(ErrorCode::InvalidConfig, "unknown manifold '" + name + "'");
}

Manifold::Manifold(ManifoldKind kind, int dim) : kind_(kind), dim_(dim) {
  if (dim < 1)
    throw Error(ErrorCode::InvalidConfig, "manifold dimension must be positive");
}

double Manifold::k_min() const {
  switch (kind_) {
  case ManifoldKind::Sphere: return 1.0;
  case ManifoldKind::Hyperboloid: return -1.0;
  case ManifoldKind::Euclidean: return 0.0;
  }
  return 0.0;
}

double Manifold::k_max() const { return k_min(); }

double Manifold::injectivity_radius() const {
  return kind_ == ManifoldKind::Sphere ? kPi
                                       : std::numeric_limits<double>::infinity();
}

std::string Manifold::name() const {
  switch (kind_) {
  case ManifoldKind::Sphere: return "S^" + std::to_string(dim_);
  case ManifoldKind::Hyperboloid: return "H^" + std::to_string(dim_);
  case ManifoldKind::Euclidean: return "R^" + std::to_string(dim_);
  }
  return "?";
}

double Manifold::ambient_inner(const Vector &a, const Vector &b) const {
  if (kind_ == ManifoldKind::Hyperboloid)
    return a.tail(dim_).dot(b.tail(dim_)) - a[0] * b[0];
  return a.dot(b);
}

Vector Manifold::renormalize_point(Vector x) const {
  switch (kind_) {
  case ManifoldKind::Sphere: x /= x.norm(); break;
  case ManifoldKind::Hyperboloid:
    x[0] = std::sqrt(1.0 + x.tail(dim_).squaredNorm());
    break;
  case ManifoldKind::Euclidean: break;
  }
  return x;
}

Vector Manifold::renormalize_tangent(const Vector &base, Vector v) const {
  switch (kind_) {
  case ManifoldKind::Sphere: v -= base.dot(v) * base; break;
  // <x,x>_L = -1, so v + <x,v>_L x is the Lorentz-orthogonal projection.
  case ManifoldKind::Hyperboloid: v += ambient_inner(base, v) * base; break;
  case ManifoldKind::Euclidean: break;
  }
  return v;
}

bool Manifold::is_point(const Point &x, double tol) const {
  if (x.coords.size() != ambient_dim() || !x.coords.allFinite()) return false;
  switch (kind_) {
  case ManifoldKind::Sphere: return std::abs(x.coords.norm() - 1.0) <= tol;
  case ManifoldKind::Hyperboloid: {
    const double scale = 1.0 + x.coords[0] * x.coords[0];
    return x.coords[0] > 0 &&
           std::abs(ambient_inner(x.coords, x.coords) + 1.0) <= tol * scale;
  }
  case ManifoldKind::Euclidean: return true;
  }
  return false;
}

bool Manifold::is_tangent(const TangentVector &v, double tol) const {
  if (v.coords.size() != ambient_dim() || !v.coords.allFinite()) return false;
  if (kind_ == ManifoldKind::Euclidean) return true;
  const double scale = (1.0 + v.coords.norm()) * (1.0 + v.base.coords.norm());
  return std::abs(ambient_inner(v.base.coords, v.coords)) <= tol * scale;
}

Point Manifold::point(Vector coords) const {
  Point p{std::move(coords)};
  if (!is_point(p))
    throw Error(ErrorCode::InvalidPoint,
                describe(p.coords) + " is not a point of " + name());
  p.coords = renormalize_point(std::move(p.coords));
  return p;
}

Point Manifold::origin() const {
  Vector o = Vector::Zero(ambient_dim());
  if (kind_ != ManifoldKind::Euclidean) o[0] = 1.0;
  return Point{o};
}

TangentVector Manifold::tangent(const Point &base, Vector coords) const {
  TangentVector v{base, std::move(coords)};
  if (!is_tangent(v))
    throw Error(ErrorCode::InvalidTangent,
                describe(v.coords) + " is not tangent at " + describe(base.coords));
  return v;
}

TangentVector Manifold::zero(const Point &base) const {
  return {base, Vector::Zero(ambient_dim())};
}

TangentVector Manifold::project_to_tangent(const Point &base,
                                           const Vector &ambient) const {
  return {base, renormalize_tangent(base.coords, ambient)};
}

bool Manifold::same_base(const Point &a, const Point &b) const {
  return (a.coords - b.coords).lpNorm<Eigen::Infinity>() <=
         1e-12 * (1.0 + a.coords.lpNorm<Eigen::Infinity>());
}

double Manifold::inner(const TangentVector &u, const TangentVector &v) const {
  if (!same_base(u.base, v.base))
    throw Error(ErrorCode::BaseMismatch, "inner product of vectors at " +
                                             describe(u.base.coords) + " and " +
                                             describe(v.base.coords));
  return ambient_inner(u.coords, v.coords);
}

double Manifold::norm(const TangentVector &v) const {
  return std::sqrt(std::max(0.0, ambient_inner(v.coords, v.coords)));
}

double Manifold::dist(const Point &x, const Point &y) const {
  // Expression templates only: this sits in the innermost regret loops.
  const auto diff = x.coords - y.coords;
  switch (kind_) {
  case ManifoldKind::Sphere:
    // arccos(<x,y>) evaluated through the chord length, which stays accurate
    // near both coincident and antipodal points.
    return 2.0 * std::atan2(diff.norm(), (x.coords + y.coords).norm());
  case ManifoldKind::Hyperboloid: {
    // arccosh(-<x,y>_L) via the Minkowski chord |x-y|_L^2 = -2 - 2<x,y>_L.
    const double d0 = x.coords(0) - y.coords(0);
    const double chord2 = std::max(0.0, diff.squaredNorm() - 2.0 * d0 * d0);
    return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
  }
  case ManifoldKind::Euclidean: return diff.norm();
  }
  return 0.0;
}

Point Manifold::exp(const TangentVector &v) const {
  if (!is_tangent(v))
    throw Error(ErrorCode::InvalidTangent, "exp of a non-tangent vector at " +
                                               describe(v.base.coords));
  const Vector &x = v.base.coords;
  const double t = norm(v);
  switch (kind_) {
  case ManifoldKind::Sphere: {
    if (t >= kPi)
      throw Error(ErrorCode::BeyondInjectivity,
                  "sphere exp with |v| = " + std::to_string(t) + " >= pi");
    const double sinc = t < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t;
    return Point{renormalize_point(std::cos(t) * x + sinc * v.coords)};
  }
  case ManifoldKind::Hyperboloid: {
    const double sinhc = t < 1e-8 ? 1.0 + t * t / 6.0 : std::sinh(t) / t;
    return Point{renormalize_point(std::cosh(t) * x + sinhc * v.coords)};
  }
  case ManifoldKind::Euclidean: return Point{x + v.coords};
  }
  return v.base;
}

Point Manifold::geodesic_step(const TangentVector &v) const {
  if (kind_ != ManifoldKind::Sphere || norm(v) < kPi) return exp(v);
  const double t = norm(v);
  return Point{renormalize_point(std::cos(t) * v.base.coords +
                                 (std::sin(t) / t) * v.coords)};
}

TangentVector Manifold::log(const Point &x, const Point &y) const {
  const double t = dist(x, y);
  switch (kind_) {
  case ManifoldKind::Sphere: {
    if (t >= kPi - kAntipodalMargin)
      throw Error(ErrorCode::BeyondInjectivity,
                  "sphere log between (near-)antipodal points");
    Vector u = y.coords - x.coords.dot(y.coords) * x.coords;
    u -= x.coords.dot(u) * x.coords;
    const double un = u.norm();
    if (un == 0.0 || t == 0.0) return zero(x);
    return {x, (t / un) * u};
  }
  case ManifoldKind::Hyperboloid: {
    if (t == 0.0) return zero(x);
    Vector u = y.coords + ambient_inner(x.coords, y.coords) * x.coords;
    const double ratio = t < 1e-8 ? 1.0 - t * t / 6.0 : t / std::sinh(t);
    return {x, renormalize_tangent(x.coords, ratio * u)};
  }
  case ManifoldKind::Euclidean: return {x, y.coords - x.coords};
  }
  return zero(x);
}

void Manifold::accumulate_log(const Point &x, const Point &y, double weight,
                              Vector &acc) const {
  const Vector &xc = x.coords;
  const Vector &yc = y.coords;
  switch (kind_) {
  case ManifoldKind::Sphere: {
    const double t = dist(x, y);
    if (t >= kPi - kAntipodalMargin)
      throw Error(ErrorCode::BeyondInjectivity,
                  "sphere log between (near-)antipodal points");
    // Same two projection passes as log(), folded into one coefficient.
    const double c = xc.dot(yc);
    const double coef = c + (c - c * xc.squaredNorm());
    const double un = (yc - coef * xc).norm();
    if (un == 0.0 || t == 0.0) return;
    acc.noalias() += (weight * t / un) * (yc - coef * xc);
    return;
  }
  case ManifoldKind::Hyperboloid: {
    const double t = dist(x, y);
    const double ratio = t < 1e-8 ? 1.0 - t * t / 6.0 : t / std::sinh(t);
    const double a = ambient_inner(xc, yc);
    const double coef = a + (a + a * ambient_inner(xc, xc));
    acc.noalias() += (weight * ratio) * (yc + coef * xc);
    return;
  }
  case ManifoldKind::Euclidean: acc.noalias() += weight * (yc - xc); return;
  }
}

TangentVector Manifold::parallel_transport(const TangentVector &v,
                                           const Point &to) const {
  const Vector &x = v.base.coords;
  const Vector &y = to.coords;
  switch (kind_) {
  case ManifoldKind::Sphere: {
    const double c = x.dot(y);
    if (dist(v.base, to) >= kPi - kAntipodalMargin)
      throw Error(ErrorCode::BeyondInjectivity,
                  "sphere transport between (near-)antipodal points");
    Vector w = v.coords - (y.dot(v.coords) / (1.0 + c)) * (x + y);
    return {to, renormalize_tangent(y, std::move(w))};
  }
  case ManifoldKind::Hyperboloid: {
    const double c = ambient_inner(x, y);
    Vector w = v.coords + (ambient_inner(y, v.coords) / (1.0 - c)) * (x + y);
    return {to, renormalize_tangent(y, std::move(w))};
  }
  case ManifoldKind::Euclidean: return {to, v.coords};
  }
  return v;
}

Matrix Manifold::tangent_basis(const Point &x) const {
  const int n = ambient_dim();
  switch (kind_) {
  case ManifoldKind::Euclidean: return Matrix::Identity(n, n);
  case ManifoldKind::Sphere: {
    // Householder reflection H with H e0 = x; H e1..H ed span T_x S^d.
    Vector w = -x.coords;
    w[0] += 1.0;
    const double ww = w.squaredNorm();
    Matrix basis = Matrix::Zero(n, dim_);
    for (int k = 0; k < dim_; ++k) {
      basis(k + 1, k) = 1.0;
      if (ww > 1e-28) basis.col(k) -= (2.0 * w[k + 1] / ww) * w;
    }
    return basis;
  }
  case ManifoldKind::Hyperboloid: {
    // Columns 1..d of the Lorentz boost taking e0 to x.
    const double x0 = x.coords[0];
    const Vector xs = x.coords.tail(dim_);
    Matrix basis = Matrix::Zero(n, dim_);
    for (int k = 0; k < dim_; ++k) {
      basis(0, k) = xs[k];
      basis.col(k).tail(dim_) = (xs[k] / (1.0 + x0)) * xs;
      basis(k + 1, k) += 1.0;
    }
    return basis;
  }
  }
  return {};
}

TangentVector Manifold::sample_unit_tangent(const Point &x, Rng &rng) const {
  std::normal_distribution<double> normal;
  Vector g(dim_);
  double gn = 0.0;
  do {
    for (int k = 0; k < dim_; ++k) g[k] = normal(rng);
    gn = g.norm();
  } while (gn < 1e-300);
  Vector v = tangent_basis(x) * (g / gn);
  v = renormalize_tangent(x.coords, std::move(v));
  TangentVector u{x, std::move(v)};
  u.coords /= norm(u);
  return u;
}

double Manifold::sn(double t) const {
  switch (kind_) {
  case ManifoldKind::Sphere: return std::sin(t);
  case ManifoldKind::Hyperboloid: return std::sinh(t);
  case ManifoldKind::Euclidean: return t;
  }
  return t;
}

GeodesicBall make_ball(const Manifold &m, Point center, double radius) {
  if (!m.is_point(center))
    throw Error(ErrorCode::InvalidBall, "ball center is not on " + m.name());
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw Error(ErrorCode::InvalidBall, "ball radius must be positive and finite");
  if (m.k_max() > 0.0 && radius >= kPi / (2.0 * std::sqrt(m.k_max())))
    throw Error(ErrorCode::InvalidBall,
                "ball radius must stay below pi/(2 sqrt(K_max)) on " + m.name());
  return {std::move(center), radius};
}

bool ball_contains(const Manifold &m, const GeodesicBall &ball, const Point &x,
                   double tol) {
  return m.dist(ball.center, x) <= ball.radius + tol;
}

Point project_ball(const Manifold &m, const GeodesicBall &ball, const Point &x) {
  const double d = m.dist(ball.center, x);
  if (d <= ball.radius) return x;
  if (d >= m.injectivity_radius())
    throw Error(ErrorCode::BeyondInjectivity, "projection source too far from center");
  const TangentVector v = m.log(ball.center, x);
  return m.exp(v.scaled(ball.radius / m.norm(v)));
}

GeodesicBall shrink_ball(const GeodesicBall &ball, double tau) {
  if (!(tau >= 0.0 && tau < 1.0))
    throw Error(ErrorCode::InvalidShrinkage,
                "shrinkage factor must lie in [0, 1), got " + std::to_string(tau));
  return {ball.center, (1.0 - tau) * ball.radius};
}

Point sample_uniform_ball(const Manifold &m, const GeodesicBall &ball, Rng &rng) {
  const int d = m.dim();
  const double r = ball.radius;
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // Proposal t = r U^(1/d) has density ∝ t^(d-1); accept with
  // (sn(t)/t)^(d-1) normalized by its supremum on [0, r].
  auto ratio = [&](double t) { return t > 0.0 ? m.sn(t) / t : 1.0; };
  const double envelope = std::max(1.0, ratio(r));
  double t = 0.0;
  for (;;) {
    t = r * std::pow(unif(rng), 1.0 / d);
    if (d == 1) break;
    const double accept = std::pow(ratio(t) / envelope, d - 1);
    if (unif(rng) <= accept) break;
  }
  const TangentVector u = m.sample_unit_tangent(ball.center, rng);
  return m.exp(u.scaled(t));
}

} // namespace rdo
