#pragma once

// Shared fixtures for the test binaries: seeded samplers and small loss
// oracles with closed-form values.

#include <cmath>
#include <numbers>
#include <vector>

#include "rdo/manifold.hpp"
#include "rdo/online.hpp"
#include "rdo/random.hpp"

namespace rdo::test {

inline constexpr double kPi = std::numbers::pi;

inline std::vector<Manifold> all_charts(int dim) {
  return {Manifold::sphere(dim), Manifold::hyperboloid(dim), Manifold::euclidean(dim)};
}

/// A random point within `radius` of the chart origin.
inline Point random_point(const Manifold &m, Rng &rng, double radius = 1.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const TangentVector u = m.sample_unit_tangent(m.origin(), rng);
  return m.exp(u.scaled(radius * unit(rng)));
}

/// A random tangent vector at x with norm in [0, max_norm).
inline TangentVector random_tangent(const Manifold &m, const Point &x, Rng &rng,
                                    double max_norm) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return m.sample_unit_tangent(x, rng).scaled(max_norm * unit(rng));
}

/// f(x) = c.
class ConstantLoss : public LossOracle {
public:
  ConstantLoss(const Manifold &m, double c) : m_(m), c_(c) {}
  double value(const Point &, int, int) const override { return c_; }
  TangentVector gradient(const Point &x, int, int) const override { return m_.zero(x); }
  double lipschitz() const override { return 1.0; }

private:
  Manifold m_;
  double c_;
};

/// Euclidean f(y) = <a, y>.
class LinearLoss : public LossOracle {
public:
  explicit LinearLoss(Vector a) : a_(std::move(a)) {}
  double value(const Point &x, int, int) const override { return a_.dot(x.coords); }
  TangentVector gradient(const Point &x, int, int) const override { return {x, a_}; }
  double lipschitz() const override { return a_.norm(); }

private:
  Vector a_;
};

/// f_{i,t}(x) = d^2(x, z_{i,t}) with targets read from a flat table
/// indexed [(t - 1) * n + i].
class TableFrechetLoss : public LossOracle {
public:
  TableFrechetLoss(const Manifold &m, int agents, std::vector<Point> targets,
                   double lipschitz)
      : m_(m), n_(agents), z_(std::move(targets)), l_(lipschitz) {}
  double value(const Point &x, int i, int t) const override {
    const double d = m_.dist(x, z(i, t));
    return d * d;
  }
  TangentVector gradient(const Point &x, int i, int t) const override {
    return m_.log(x, z(i, t)).scaled(-2.0);
  }
  double lipschitz() const override { return l_; }
  const Point &z(int i, int t) const { return z_[static_cast<std::size_t>(t - 1) * n_ + i]; }

private:
  Manifold m_;
  int n_;
  std::vector<Point> z_;
  double l_;
};

} // namespace rdo::test
