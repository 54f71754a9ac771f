#include <gtest/gtest.h>

#include <cmath>

#include "rdo/error.hpp"
#include "rdo/smoothing.hpp"
#include "support.hpp"

using namespace rdo;
using namespace rdo::test;

namespace {

Point euclid_point(std::initializer_list<double> c) {
  Vector v(static_cast<Eigen::Index>(c.size()));
  int k = 0;
  for (double x : c) v[k++] = x;
  return Manifold::euclidean(static_cast<int>(c.size())).point(v);
}

} // namespace

TEST(SmoothedValue, ConstantLossIsExact) {
  for (const Manifold &m : all_charts(3)) {
    Rng rng(1);
    const ConstantLoss f(m, 2.5);
    const McEstimate e = smoothed_value(m, f, 0, 1, m.origin(), 0.1, rng, 500);
    EXPECT_EQ(e.value, 2.5);
    EXPECT_EQ(e.std_error, 0.0);
  }
}

TEST(SmoothedValue, ApproachesLossAsDeltaShrinks) {
  const Manifold m = Manifold::sphere(2);
  Rng rng(2);
  const Point z = m.exp(m.sample_unit_tangent(m.origin(), rng).scaled(0.4));
  const Point x = m.exp(m.sample_unit_tangent(m.origin(), rng).scaled(0.3));
  const double lip = 4.0 * (kPi / 4);
  const TableFrechetLoss f(m, 1, {z}, lip);
  for (double delta : {0.01, 0.05}) {
    const McEstimate e = smoothed_value(m, f, 0, 1, x, delta, rng, 20000);
    EXPECT_LE(std::abs(e.value - f.value(x, 0, 1)), delta * lip + 3.0 * e.std_error)
        << "delta = " << delta;
  }
}

TEST(SmoothedValue, EuclideanQuadraticClosedForm) {
  // Averaging |x + delta u - z|^2 over the unit sphere adds exactly delta^2.
  const Manifold m = Manifold::euclidean(3);
  const Point z = euclid_point({0.2, -0.1, 0.4});
  const Point x = euclid_point({-0.3, 0.5, 0.1});
  const TableFrechetLoss f(m, 1, {z}, 4.0);
  const double delta = 0.2;
  Rng rng(3);
  const McEstimate e = smoothed_value(m, f, 0, 1, x, delta, rng, 100000);
  const double exact = (x.coords - z.coords).squaredNorm() + delta * delta;
  EXPECT_GT(e.std_error, 0.0);
  EXPECT_LE(std::abs(e.value - exact), 3.0 * e.std_error);
}

TEST(SmoothedValue, RejectsEmptySample) {
  const Manifold m = Manifold::euclidean(2);
  const ConstantLoss f(m, 1.0);
  Rng rng(4);
  EXPECT_THROW(smoothed_value(m, f, 0, 1, m.origin(), 0.1, rng, 0), Error);
}

TEST(EstimatorMean, ConstantLossIsZero) {
  const Manifold m = Manifold::sphere(3);
  const ConstantLoss f(m, -1.0);
  Rng rng(5);
  const EstimatorMeanReport r = estimator_mean_check(m, f, 0, 1, m.origin(), 0.05, rng, 2000);
  EXPECT_EQ(r.estimator_mean.norm(), 0.0);
  EXPECT_EQ(r.reference_gradient.norm(), 0.0);
  EXPECT_EQ(r.max_z, 0.0);
}

TEST(EstimatorMean, EuclideanLinearIsUnbiased) {
  // d <a, u> u averages to a for u uniform on the unit sphere.
  const Manifold m = Manifold::euclidean(4);
  Vector a(4);
  a << 1.0, -2.0, 0.5, 0.0;
  const LinearLoss f(a);
  Rng rng(6);
  const EstimatorMean e = estimator_mean(m, f, 0, 1, m.origin(), 0.1, rng, 100000);
  for (int k = 0; k < 4; ++k)
    EXPECT_LE(std::abs(e.mean[k] - a[k]), 3.0 * e.std_error[k] + 1e-12) << "coordinate " << k;
}

TEST(EstimatorMean, SphereFrechetMatchesSmoothedGradient) {
  const Manifold m = Manifold::sphere(2);
  Rng rng(7);
  const Point x = m.origin();
  const Point z = m.exp(m.sample_unit_tangent(x, rng).scaled(0.5));
  const TableFrechetLoss f(m, 1, {z}, kPi);
  const EstimatorMeanReport r = estimator_mean_check(m, f, 0, 1, x, 0.05, rng, 100000);
  EXPECT_LT(r.relative_error, 0.05);
  // The smoothed gradient is close to the plain one, -2 Log_x z.
  const Matrix basis = m.tangent_basis(x);
  const Vector plain = basis.transpose() * f.gradient(x, 0, 1).coords;
  EXPECT_LT((r.reference_gradient - plain).norm() / plain.norm(), 0.05);
}

TEST(Subconvexity, ZeroWhenPointsCoincide) {
  const Manifold m = Manifold::sphere(3);
  Rng rng(8);
  const Point z = m.exp(m.sample_unit_tangent(m.origin(), rng).scaled(0.3));
  const TableFrechetLoss f(m, 1, {z}, kPi);
  const Point x = m.exp(m.sample_unit_tangent(m.origin(), rng).scaled(0.2));
  const McEstimate e = subconvexity_defect(m, f, 0, 1, x, x, 0.05, rng, 20000);
  EXPECT_LE(std::abs(e.value), 3.0 * e.std_error);
}

TEST(Subconvexity, EuclideanQuadratic) {
  // For |y - z|^2 the defect of the smoothed loss is |y - x|^2.
  const Manifold m = Manifold::euclidean(3);
  const Point z = euclid_point({0.0, 0.3, -0.2});
  const Point x = euclid_point({0.4, 0.1, 0.0});
  const Point y = euclid_point({-0.2, -0.3, 0.3});
  const TableFrechetLoss f(m, 1, {z}, 4.0);
  Rng rng(9);
  const McEstimate e = subconvexity_defect(m, f, 0, 1, x, y, 0.05, rng, 50000);
  EXPECT_GE(e.value, -3.0 * e.std_error);
  EXPECT_LE(std::abs(e.value - (y.coords - x.coords).squaredNorm()), 4.0 * e.std_error);
}
