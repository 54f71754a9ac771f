#include "rdo/consensus.hpp"

#include <algorithm>
#include <cmath>

#include "rdo/error.hpp"
#include "rdo/random.hpp"

namespace rdo {

void Configuration::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!chart.is_point(points[i]))
      throw Error(ErrorCode::InvalidPoint,
                  "agent " + std::to_string(i) + " is not on " + chart.name());
    if (!ball_contains(chart, ball, points[i], 1e-9))
      throw Error(ErrorCode::InvalidBall,
                  "agent " + std::to_string(i) + " lies outside the feasible ball");
  }
}

namespace {

Vector weighted_log_sum(const Manifold &m, const Point &x,
                        std::span<const Point> points,
                        std::span<const double> weights) {
  Vector acc = Vector::Zero(m.ambient_dim());
  for (std::size_t j = 0; j < points.size(); ++j)
    if (weights[j] != 0.0) m.accumulate_log(x, points[j], weights[j], acc);
  return acc;
}

} // namespace

double frechet_residual(const Manifold &m, const Point &x,
                        std::span<const Point> points,
                        std::span<const double> weights) {
  return m.norm({x, weighted_log_sum(m, x, points, weights)});
}

Point frechet_mean(const Manifold &m, std::span<const Point> points,
                   std::span<const double> weights, FrechetOptions opts) {
  if (points.empty() || points.size() != weights.size())
    throw Error(ErrorCode::InvalidConfig,
                "Fréchet mean needs one weight per point and at least one point");
  std::size_t first = 0;
  while (first < weights.size() && weights[first] <= 0.0) ++first;
  if (first == weights.size())
    throw Error(ErrorCode::InvalidConfig, "Fréchet mean weights are all zero");

  Point x = points[first];
  double residual = 0.0;
  for (int it = 0; it <= opts.max_iter; ++it) {
    TangentVector step{x, weighted_log_sum(m, x, points, weights)};
    step = m.project_to_tangent(x, step.coords);
    residual = m.norm(step);
    if (residual < opts.tol) return x;
    if (it == opts.max_iter) break;
    x = m.exp(step);
  }
  throw ConvergenceError("Fréchet mean did not converge in " +
                             std::to_string(opts.max_iter) + " iterations",
                         residual);
}

Point frechet_mean(const Manifold &m, std::span<const Point> points,
                   FrechetOptions opts) {
  const std::vector<double> w(points.size(), 1.0 / static_cast<double>(points.size()));
  return frechet_mean(m, points, w, opts);
}

double variance_about(const Manifold &m, std::span<const Point> points,
                      const Point &anchor) {
  double acc = 0.0;
  for (const Point &p : points) {
    const double d = m.dist(p, anchor);
    acc += d * d;
  }
  return acc / static_cast<double>(points.size());
}

double variance(const Configuration &cfg, FrechetOptions opts) {
  const Point mean = frechet_mean(cfg.chart, cfg.points, opts);
  return variance_about(cfg.chart, cfg.points, mean);
}

double weighted_dispersion(const Configuration &cfg, const WeightMatrix &w) {
  if (w.size() != cfg.size())
    throw Error(ErrorCode::InvalidConfig, "weight matrix size does not match agent count");
  double acc = 0.0;
  for (int i = 0; i < cfg.size(); ++i)
    for (int j : w.support(i)) {
      if (j == i) continue;
      const double d = cfg.chart.dist(cfg.points[i], cfg.points[j]);
      acc += w(i, j) * d * d;
    }
  return acc;
}

std::vector<Point> consensus_step(const Manifold &m, std::span<const Point> points,
                                  const WeightMatrix &w, double s) {
  if (!(s >= 0.0 && s <= 1.0))
    throw Error(ErrorCode::InvalidConfig,
                "consensus step-size must lie in [0, 1], got " + std::to_string(s));
  if (w.size() != static_cast<int>(points.size()))
    throw Error(ErrorCode::InvalidConfig, "weight matrix size does not match agent count");
  std::vector<Point> out;
  out.reserve(points.size());
  for (int i = 0; i < w.size(); ++i) {
    const Point &yi = points[i];
    Vector dir = Vector::Zero(m.ambient_dim());
    for (int j : w.support(i))
      if (j != i) m.accumulate_log(yi, points[j], w(i, j), dir);
    out.push_back(m.exp(m.project_to_tangent(yi, s * dir)));
  }
  return out;
}

Configuration consensus_step(const Configuration &cfg, const WeightMatrix &w,
                             double s) {
  return {cfg.chart, cfg.ball, consensus_step(cfg.chart, cfg.points, w, s)};
}

ContractionMeasurement contraction_ratio(const Configuration &cfg,
                                         const WeightMatrix &w, double s) {
  const Point mean = frechet_mean(cfg.chart, cfg.points);
  ContractionMeasurement out;
  out.variance_before = variance_about(cfg.chart, cfg.points, mean);
  if (out.variance_before <= 0.0)
    throw Error(ErrorCode::DegenerateConfiguration,
                "contraction ratio of a configuration with zero variance");
  const std::vector<Point> next = consensus_step(cfg.chart, cfg.points, w, s);
  out.ratio = variance_about(cfg.chart, next, mean) / out.variance_before;
  const Point next_mean = frechet_mean(cfg.chart, next);
  out.ratio_post_mean = variance_about(cfg.chart, next, next_mean) / out.variance_before;
  return out;
}

double worst_contraction_ratio(const Manifold &m, const GeodesicBall &ball,
                               const WeightMatrix &w, double s, int samples,
                               std::uint64_t seed) {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    Rng rng = make_rng(seed, {stream::kCalibration, static_cast<std::uint64_t>(k)});
    Configuration cfg{m, ball, {}};
    for (int i = 0; i < w.size(); ++i)
      cfg.points.push_back(sample_uniform_ball(m, ball, rng));
    worst = std::max(worst, contraction_ratio(cfg, w, s).ratio);
  }
  return worst;
}

} // namespace rdo
