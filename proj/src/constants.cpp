#include "rdo/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rdo/error.hpp"

namespace rdo {

namespace {
constexpr double kPi = std::numbers::pi;
}

double c1(double k, double d) {
  if (k >= 0.0) return 1.0;
  const double a = std::sqrt(-k) * d;
  if (a < 1e-8) return 1.0 + a * a / 3.0;
  return a / std::tanh(a);
}

double c2(double k, double d) {
  if (k <= 0.0) return 1.0;
  const double a = std::sqrt(k) * d;
  if (a >= kPi)
    throw Error(ErrorCode::DomainViolation,
                "c2 requires D < pi/sqrt(K); got sqrt(K) D = " + std::to_string(a));
  if (a < 1e-8) return 1.0 - a * a / 3.0;
  return a / std::tan(a);
}

double c7(double k, double d) {
  if (k <= 0.0) return 0.0;
  const double a = std::sqrt(k) * d;
  if (a >= kPi / 2.0) return 0.0;
  if (a < 1e-8) return -(1.0 - a * a / 3.0);
  return -a / std::tan(a);
}

double c11(double k, double r) {
  if (k == 0.0) return r;
  if (k > 0.0) return std::sin(std::sqrt(k) * r) / std::sqrt(k);
  return std::sinh(std::sqrt(-k) * r) / std::sqrt(-k);
}

double default_distortion_constant(double k_min, double k_max) {
  return std::max(std::abs(k_min), k_max);
}

CurvatureContext CurvatureContext::with_defaults(double k_min, double k_max,
                                                 double diameter, int agents,
                                                 double sigma2, double smoothing) {
  const double c = default_distortion_constant(k_min, k_max);
  CurvatureContext ctx;
  ctx.k_min = k_min;
  ctx.k_max = k_max;
  ctx.diameter = diameter;
  ctx.c3 = c;
  ctx.c4 = c;
  ctx.c8 = c;
  ctx.agents = agents;
  ctx.sigma2 = sigma2;
  ctx.smoothing = smoothing;
  return ctx;
}

void CurvatureContext::validate() const {
  auto fail = [](const std::string &what) {
    throw Error(ErrorCode::DomainViolation, what);
  };
  if (!(k_min <= k_max)) fail("curvature bounds require K_min <= K_max");
  if (!(diameter > 0.0)) fail("diameter D must be positive");
  if (k_max > 0.0 && !(diameter < kPi / (2.0 * std::sqrt(k_max))))
    fail("positive curvature requires D < pi/(2 sqrt(K_max)), got D = " +
         std::to_string(diameter));
  if (c3 < 0.0 || c4 < 0.0 || c8 < 0.0)
    fail("distortion constants C3, C4, C8 must be nonnegative");
  if (agents < 1) fail("agent count must be positive");
  if (!(sigma2 >= 0.0 && sigma2 < 1.0))
    fail("sigma2(W) must lie in [0, 1) (connected network)");
}

std::vector<std::pair<std::string, double>> DerivedConstants::entries() const {
  return {{"C1", C1},       {"C2", C2},       {"C5", C5},
          {"C6", C6},       {"C7", C7},       {"C9", C9},
          {"C10", C10},     {"alpha", alpha}, {"rho", rho},
          {"s_consensus", s_consensus},       {"s_network", s_network}};
}

DerivedConstants derive(const CurvatureContext &ctx) {
  ctx.validate();
  const double D = ctx.diameter;
  const double D2 = D * D;

  DerivedConstants out;
  out.C1 = c1(ctx.k_min, D);
  out.C2 = c2(ctx.k_max, D);
  out.C7 = c7(ctx.k_max, 2.0 * D);

  const double inner = 1.0 + 16.0 * ctx.c4 * D2;
  out.alpha = out.C2 / (inner * inner);

  const double lip = 1.0 + ctx.c4 * D2;
  out.rho = 1.0 - out.C2 * out.C2 * out.C2 * (1.0 - ctx.sigma2) /
                      (4.0 * out.C1 * lip * lip);
  out.s_consensus = out.C2 / (2.0 * out.C1);
  out.s_network = out.alpha * (1.0 - ctx.sigma2) / (4.0 * out.C1);

  out.C5 = std::sqrt(8.0 * std::sqrt(static_cast<double>(ctx.agents)) /
                         (1.0 - out.rho) +
                     out.C1 + out.C7);

  const double kabs = std::sqrt(std::max(ctx.k_max, std::abs(ctx.k_min)));
  if (ctx.smoothing > 0.0) {
    const double delta = ctx.smoothing;
    out.C9 = (std::cosh(kabs * delta) - 1.0) / (delta * delta);
  } else {
    out.C9 = 0.5 * kabs * kabs;
  }
  out.C10 = 2.0 * ctx.c8 * inner;
  out.C6 = out.C9 * D2 + 4.0 * out.C10 * D2;
  return out;
}

double shrink_theta(double k_min, double k_max, double diameter,
                    double inner_radius) {
  const double reach = diameter + inner_radius;
  return c11(k_max, reach) / c11(k_min, reach);
}

double coupled_shrinkage(double delta, double k_min, double k_max,
                         double diameter, double inner_radius) {
  return delta / (inner_radius * shrink_theta(k_min, k_max, diameter, inner_radius));
}

double network_error_bound(int agents, double eta, double lipschitz, double rho) {
  return 2.0 * std::sqrt(static_cast<double>(agents)) * eta * lipschitz / (1.0 - rho);
}

} // namespace rdo
