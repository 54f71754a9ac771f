#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rdo {

// Curvature comparison functions. K is a sectional curvature bound, the
// second argument a distance.

/// sqrt(-K) D / tanh(sqrt(-K) D) for K < 0, else 1.
double c1(double k, double d);
/// sqrt(K) D cot(sqrt(K) D) for K > 0, else 1. Requires D < pi/sqrt(K).
double c2(double k, double d);
/// Projection-error factor: -sqrt(K) d cot(sqrt(K) d) for K > 0 and
/// d <= pi/(2 sqrt(K)), 0 otherwise. Negative on (0, pi/(2 sqrt(K))).
double c7(double k, double d);
/// Generalized sine: sin(sqrt(K) r)/sqrt(K), r, or sinh(sqrt(-K) r)/sqrt(-K).
double c11(double k, double r);

/// Default for the externally sourced distortion constants C3, C4, C8.
double default_distortion_constant(double k_min, double k_max);

struct CurvatureContext {
  double k_min = 0.0;
  double k_max = 0.0;
  double diameter = 1.0;  // D
  double c3 = 0.0;
  double c4 = 0.0;
  double c8 = 0.0;
  int agents = 1;         // n
  double sigma2 = 0.0;    // second singular value of W
  double smoothing = 0.0; // delta used by C9; <= 0 means the delta -> 0 limit

  /// Fills c3, c4, c8 with default_distortion_constant().
  static CurvatureContext with_defaults(double k_min, double k_max,
                                        double diameter, int agents,
                                        double sigma2, double smoothing = 0.0);

  /// Throws DomainViolation naming the violated condition.
  void validate() const;
};

struct DerivedConstants {
  double C1 = 1.0;
  double C2 = 1.0;
  double C5 = 0.0;
  double C6 = 0.0;
  double C7 = 0.0;
  double C9 = 0.0;
  double C10 = 0.0;
  double alpha = 1.0;
  double rho = 0.0;
  double s_consensus = 0.5; // C2 / (2 C1), variance-optimal consensus step
  double s_network = 0.0;   // alpha (1 - sigma2) / (4 C1), network-error option

  /// (name, value) pairs in a fixed order for reporting.
  std::vector<std::pair<std::string, double>> entries() const;
};

DerivedConstants derive(const CurvatureContext &ctx);

/// Radius ratio theta = c11(K_max, D + r) / c11(K_min, D + r) guaranteeing a
/// theta*r ball around every point of the shrunken set stays in the set.
double shrink_theta(double k_min, double k_max, double diameter, double inner_radius);

/// tau = delta / (r theta).
double coupled_shrinkage(double delta, double k_min, double k_max,
                         double diameter, double inner_radius);

/// Network-error bound 2 sqrt(n) eta L / (1 - rho).
double network_error_bound(int agents, double eta, double lipschitz, double rho);

} // namespace rdo
