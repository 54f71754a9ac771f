#pragma once

#include "rdo/manifold.hpp"
#include "rdo/online.hpp"
#include "rdo/random.hpp"

namespace rdo {

/// Monte Carlo estimate with its standard error.
struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Smoothed loss f^delta(x) = E_u f(Exp_x(delta u)), u uniform on the unit
/// tangent sphere, estimated from m samples.
McEstimate smoothed_value(const Manifold &m, const LossOracle &oracle, int agent,
                          int round, const Point &x, double delta, Rng &rng,
                          int samples);

/// Compares the mean of the two-point estimator at x against a central
/// finite-difference gradient of the ball-smoothed pullback
/// h(v) = E_{w in B_delta(0)} f(Exp_x(v + w)). Vectors are expressed in the
/// orthonormal tangent basis returned by Manifold::tangent_basis(x).
struct EstimatorMeanReport {
  Vector estimator_mean;     // MC mean of g^delta
  Vector estimator_se;       // per-coordinate standard errors
  Vector reference_gradient; // finite-difference gradient of h
  Vector reference_se;
  double relative_error = 0.0; // |mean - reference| / |reference|
  double max_z = 0.0;          // max_k |mean_k - ref_k| / sqrt(se_k^2 + ref_se_k^2)
};

EstimatorMeanReport estimator_mean_check(const Manifold &m, const LossOracle &oracle,
                                         int agent, int round, const Point &x,
                                         double delta, Rng &rng, int samples);

/// MC mean of the two-point estimator at x, in tangent-basis coordinates,
/// with per-coordinate standard errors.
struct EstimatorMean {
  Vector mean;
  Vector std_error;
};
EstimatorMean estimator_mean(const Manifold &m, const LossOracle &oracle, int agent,
                             int round, const Point &x, double delta, Rng &rng,
                             int samples);

/// f^delta(y) - f^delta(x) - <grad f^delta(x), Log_x y>, with the gradient
/// replaced by the estimator mean.
McEstimate subconvexity_defect(const Manifold &m, const LossOracle &oracle,
                               int agent, int round, const Point &x, const Point &y,
                               double delta, Rng &rng, int samples);

} // namespace rdo
