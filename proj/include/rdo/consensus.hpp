#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rdo/manifold.hpp"
#include "rdo/network.hpp"

namespace rdo {

/// Agent points together with the chart and the ball that contains them.
struct Configuration {
  Manifold chart;
  GeodesicBall ball;
  std::vector<Point> points;

  int size() const { return static_cast<int>(points.size()); }
  /// Throws InvalidPoint / InvalidBall if a point is off the manifold or
  /// outside the ball (tolerance 1e-9).
  void validate() const;
};

struct FrechetOptions {
  double tol = 1e-10;
  int max_iter = 200;
};

/// Weighted Fréchet mean by the unit-step fixed-point iteration
/// x <- Exp_x(sum_j w_j Log_x y_j), started at the first positively weighted
/// point. Throws ConvergenceError with the last residual when the residual
/// |sum_j w_j Log_x y_j| has not dropped below tol after max_iter steps.
Point frechet_mean(const Manifold &m, std::span<const Point> points,
                   std::span<const double> weights, FrechetOptions opts = {});
Point frechet_mean(const Manifold &m, std::span<const Point> points,
                   FrechetOptions opts = {});

/// |sum_j w_j Log_x y_j|.
double frechet_residual(const Manifold &m, const Point &x,
                        std::span<const Point> points,
                        std::span<const double> weights);

/// (1/n) sum_i d^2(y_i, mean).
double variance(const Configuration &cfg, FrechetOptions opts = {});
double variance_about(const Manifold &m, std::span<const Point> points,
                      const Point &anchor);

/// sum_i sum_j w_ij d^2(y_i, y_j).
double weighted_dispersion(const Configuration &cfg, const WeightMatrix &w);

/// One synchronous round x_i = Exp_{y_i}(s sum_j w_ij Log_{y_i} y_j). Every
/// output reads only the input snapshot.
std::vector<Point> consensus_step(const Manifold &m, std::span<const Point> points,
                                  const WeightMatrix &w, double s);
Configuration consensus_step(const Configuration &cfg, const WeightMatrix &w,
                             double s);

struct ContractionMeasurement {
  double variance_before = 0.0;
  /// (1/n) sum_i d^2(x_i(s), ybar) / Var({y_i}) with ybar the pre-step mean.
  double ratio = 0.0;
  /// Var({x_i(s)}) / Var({y_i}); never above `ratio`.
  double ratio_post_mean = 0.0;
};

/// Throws DegenerateConfiguration when the input variance is zero.
ContractionMeasurement contraction_ratio(const Configuration &cfg,
                                         const WeightMatrix &w, double s);

/// Largest contraction ratio over `samples` configurations drawn uniformly
/// from the ball. Used as the empirical rate when the theoretical one
/// depends on externally sourced constants.
double worst_contraction_ratio(const Manifold &m, const GeodesicBall &ball,
                               const WeightMatrix &w, double s, int samples,
                               std::uint64_t seed);

} // namespace rdo
