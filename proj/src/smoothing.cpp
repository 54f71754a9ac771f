#include "rdo/smoothing.hpp"

#include <cmath>

#include "rdo/error.hpp"

namespace rdo {

namespace {

// Running mean and variance (Welford); per-coordinate for vectors.
struct Moments {
  explicit Moments(Eigen::Index dim) : mean(Vector::Zero(dim)), m2(Vector::Zero(dim)) {}

  void add(const Vector &x) {
    ++count;
    const Vector delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta.cwiseProduct(x - mean);
  }

  Vector std_error() const {
    if (count < 2) return Vector::Zero(mean.size());
    const double n = static_cast<double>(count);
    return (m2 / ((n - 1.0) * n)).cwiseMax(0.0).cwiseSqrt();
  }

  long count = 0;
  Vector mean;
  Vector m2;
};

void require_samples(int samples) {
  if (samples < 1)
    throw Error(ErrorCode::InvalidConfig, "Monte Carlo sample count must be positive");
}

Vector basis_coordinates(const Manifold &m, const Matrix &basis,
                         const TangentVector &v) {
  Vector c(m.dim());
  for (int k = 0; k < m.dim(); ++k) c[k] = m.inner({v.base, basis.col(k)}, v);
  return c;
}

Vector sample_unit_coords(int dim, Rng &rng) {
  std::normal_distribution<double> normal;
  Vector g(dim);
  double n = 0.0;
  do {
    for (int k = 0; k < dim; ++k) g[k] = normal(rng);
    n = g.norm();
  } while (n < 1e-300);
  return g / n;
}

} // namespace

McEstimate smoothed_value(const Manifold &m, const LossOracle &oracle, int agent,
                          int round, const Point &x, double delta, Rng &rng,
                          int samples) {
  require_samples(samples);
  Moments acc(1);
  Vector sample(1);
  for (int k = 0; k < samples; ++k) {
    const TangentVector u = m.sample_unit_tangent(x, rng);
    sample[0] = oracle.value(m.exp(u.scaled(delta)), agent, round);
    acc.add(sample);
  }
  return {acc.mean[0], acc.std_error()[0]};
}

EstimatorMean estimator_mean(const Manifold &m, const LossOracle &oracle, int agent,
                             int round, const Point &x, double delta, Rng &rng,
                             int samples) {
  require_samples(samples);
  const Matrix basis = m.tangent_basis(x);
  Moments acc(m.dim());
  for (int k = 0; k < samples; ++k) {
    const TangentVector u = m.sample_unit_tangent(x, rng);
    const TangentVector g = two_point_estimate(m, oracle, agent, round, u, delta);
    acc.add(basis_coordinates(m, basis, g));
  }
  return {acc.mean, acc.std_error()};
}

EstimatorMeanReport estimator_mean_check(const Manifold &m, const LossOracle &oracle,
                                         int agent, int round, const Point &x,
                                         double delta, Rng &rng, int samples) {
  const int d = m.dim();
  const EstimatorMean est = estimator_mean(m, oracle, agent, round, x, delta, rng, samples);

  // Central differences of the pullback smoothed over the delta-ball, sharing
  // the inner ball samples between the +eps and -eps evaluations.
  const Matrix basis = m.tangent_basis(x);
  const double eps = 1e-4 * delta;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Moments fd(d);
  Vector diff(d);
  for (int k = 0; k < samples; ++k) {
    const Vector w = delta * std::pow(unif(rng), 1.0 / d) * sample_unit_coords(d, rng);
    for (int c = 0; c < d; ++c) {
      Vector plus = w, minus = w;
      plus[c] += eps;
      minus[c] -= eps;
      const double fp = oracle.value(m.exp(m.project_to_tangent(x, basis * plus)), agent, round);
      const double fm = oracle.value(m.exp(m.project_to_tangent(x, basis * minus)), agent, round);
      diff[c] = (fp - fm) / (2.0 * eps);
    }
    fd.add(diff);
  }

  EstimatorMeanReport r;
  r.estimator_mean = est.mean;
  r.estimator_se = est.std_error;
  r.reference_gradient = fd.mean;
  r.reference_se = fd.std_error();
  const double ref_norm = r.reference_gradient.norm();
  const double gap = (r.estimator_mean - r.reference_gradient).norm();
  r.relative_error = ref_norm > 0.0 ? gap / ref_norm : gap;
  for (int c = 0; c < d; ++c) {
    const double se = std::hypot(r.estimator_se[c], r.reference_se[c]);
    const double dev = std::abs(r.estimator_mean[c] - r.reference_gradient[c]);
    const double z = se > 0.0 ? dev / se : (dev > 0.0 ? INFINITY : 0.0);
    r.max_z = std::max(r.max_z, z);
  }
  return r;
}

McEstimate subconvexity_defect(const Manifold &m, const LossOracle &oracle,
                               int agent, int round, const Point &x, const Point &y,
                               double delta, Rng &rng, int samples) {
  const McEstimate fy = smoothed_value(m, oracle, agent, round, y, delta, rng, samples);
  const McEstimate fx = smoothed_value(m, oracle, agent, round, x, delta, rng, samples);

  // <E g^delta(x), Log_x y> estimated from per-sample projections.
  const TangentVector dir = m.log(x, y);
  Moments slope(1);
  Vector sample(1);
  for (int k = 0; k < samples; ++k) {
    const TangentVector u = m.sample_unit_tangent(x, rng);
    sample[0] = m.inner(two_point_estimate(m, oracle, agent, round, u, delta), dir);
    slope.add(sample);
  }
  const double slope_se = slope.std_error()[0];

  return {fy.value - fx.value - slope.mean[0],
          std::sqrt(fy.std_error * fy.std_error + fx.std_error * fx.std_error +
                    slope_se * slope_se)};
}

} // namespace rdo
