#include <gtest/gtest.h>

#include <cmath>

#include "rdo/constants.hpp"
#include "rdo/error.hpp"
#include "rdo/manifold.hpp"
#include "support.hpp"

using namespace rdo;
using rdo::test::kPi;

TEST(CurvatureFunctions, C1) {
  EXPECT_EQ(c1(0.5, 1.0), 1.0);
  EXPECT_EQ(c1(0.0, 3.0), 1.0);
  EXPECT_NEAR(c1(-1.0, 1.0), 1.0 / std::tanh(1.0), 1e-15);
  EXPECT_NEAR(c1(-1.0, 1.0), 1.313035, 5e-7);
  // Scaling: c1(K, D) depends on sqrt(-K) D only.
  EXPECT_NEAR(c1(-4.0, 0.5), c1(-1.0, 1.0), 1e-15);
  EXPECT_NEAR(c1(-1.0, 1e-10), 1.0, 1e-15);
}

TEST(CurvatureFunctions, C2) {
  EXPECT_EQ(c2(-2.0, 0.7), 1.0);
  EXPECT_NEAR(c2(1.0, kPi / 4), kPi / 4, 1e-15);
  EXPECT_NEAR(c2(1.0, kPi / 4), 0.785398, 5e-7);
  EXPECT_NEAR(c2(1.0, kPi / 2 - 1e-9), 0.0, 1e-8);
  try {
    c2(1.0, kPi);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainViolation);
  }
}

TEST(CurvatureFunctions, C7) {
  EXPECT_EQ(c7(-1.0, 1.0), 0.0);
  EXPECT_NEAR(c7(1.0, kPi / 4), -kPi / 4, 1e-15);
  EXPECT_NEAR(c7(1.0, kPi / 4), -0.785398, 5e-7);
  EXPECT_EQ(c7(1.0, kPi / 2), 0.0);
  EXPECT_EQ(c7(1.0, 2.5), 0.0);
}

TEST(CurvatureFunctions, C11) {
  EXPECT_EQ(c11(0.0, 2.5), 2.5);
  EXPECT_NEAR(c11(1.0, kPi / 2), 1.0, 1e-15);
  EXPECT_NEAR(c11(-1.0, 1.0), std::sinh(1.0), 1e-15);
  EXPECT_NEAR(c11(-1.0, 1.0), 1.175201, 5e-7);
  EXPECT_NEAR(c11(4.0, 0.3), std::sin(0.6) / 2.0, 1e-15);
}

TEST(CurvatureFunctions, RangesAndMonotonicity) {
  for (double k : {-4.0, -1.0, -0.1, 0.0, 0.3, 1.0}) {
    double prev1 = 0.0, prev2 = 2.0;
    for (int i = 1; i <= 50; ++i) {
      const double d = i * (k > 0 ? 1.5 / std::sqrt(k) : 3.0) / 50.0;
      const double a = c1(k, d), b = c2(k, d);
      EXPECT_GE(a, 1.0);
      EXPECT_GT(b, 0.0);
      EXPECT_LE(b, 1.0);
      EXPECT_GE(a, prev1);
      EXPECT_LE(b, prev2);
      if (k < 0) EXPECT_GT(a, prev1);
      if (k > 0) EXPECT_LT(b, prev2);
      prev1 = a;
      prev2 = b;
    }
  }
}

TEST(Derive, EuclideanReduction) {
  CurvatureContext ctx;
  ctx.diameter = 1.0;
  ctx.agents = 4;
  const DerivedConstants k = derive(ctx);
  EXPECT_EQ(k.C1, 1.0);
  EXPECT_EQ(k.C2, 1.0);
  EXPECT_EQ(k.s_consensus, 0.5);
  EXPECT_EQ(k.rho, 0.75);
  EXPECT_EQ(k.alpha, 1.0);
  EXPECT_EQ(k.C7, 0.0);
  EXPECT_EQ(k.C9, 0.0);
  EXPECT_NEAR(k.C5, std::sqrt(8.0 * 2.0 / 0.25 + 1.0), 1e-14);
}

TEST(Derive, HadamardGivesUnitAlpha) {
  CurvatureContext ctx = CurvatureContext::with_defaults(-1.0, 0.0, 0.8, 10, 0.4);
  ctx.c4 = 0.0;
  const DerivedConstants k = derive(ctx);
  EXPECT_EQ(k.C2, 1.0);
  EXPECT_EQ(k.alpha, 1.0);
  EXPECT_NEAR(k.C1, c1(-1.0, 0.8), 0.0);
  // With C4 = 0 and C2 = 1, rho = 1 - (1 - sigma2) / (4 C1).
  EXPECT_NEAR(k.rho, 1.0 - 0.6 / (4.0 * k.C1), 1e-15);
}

TEST(Derive, ReferenceSphereValues) {
  // Unit sphere, D = pi/4, C4 = 1.
  const CurvatureContext ctx = CurvatureContext::with_defaults(1.0, 1.0, kPi / 4, 50, 0.5);
  const DerivedConstants k = derive(ctx);
  const double D = kPi / 4, D2 = D * D;
  const double C2 = D / std::tan(D);
  EXPECT_EQ(k.C1, 1.0);
  EXPECT_NEAR(k.C2, C2, 1e-15);
  EXPECT_NEAR(k.C7, c7(1.0, 2 * D), 0.0);
  EXPECT_NEAR(k.alpha, C2 / std::pow(1 + 16 * D2, 2), 1e-15);
  const double rho = 1 - std::pow(C2, 3) * 0.5 / (4 * std::pow(1 + D2, 2));
  EXPECT_NEAR(k.rho, rho, 1e-15);
  EXPECT_NEAR(k.s_consensus, C2 / 2, 1e-15);
  EXPECT_NEAR(k.s_network, k.alpha * 0.5 / 4, 1e-15);
  EXPECT_NEAR(k.C10, 2 * (1 + 16 * D2), 1e-13);
  EXPECT_NEAR(k.C9, 0.5, 1e-15);
  EXPECT_NEAR(k.C6, 0.5 * D2 + 4 * k.C10 * D2, 1e-12);
  EXPECT_NEAR(k.C5, std::sqrt(8 * std::sqrt(50.0) / (1 - rho) + 1.0 + k.C7), 1e-12);
}

TEST(Derive, SmoothingRadiusEntersC9) {
  CurvatureContext ctx = CurvatureContext::with_defaults(-4.0, -1.0, 1.0, 3, 0.2, 0.1);
  EXPECT_NEAR(derive(ctx).C9, (std::cosh(0.2) - 1.0) / 0.01, 1e-13);
  ctx.smoothing = 1e-4;
  EXPECT_NEAR(derive(ctx).C9, 2.0, 1e-7);
  ctx.smoothing = 0.0;
  EXPECT_EQ(derive(ctx).C9, 2.0);
}

TEST(Derive, RhoDecreasesWithSigma2) {
  for (double kmax : {-1.0, 0.0, 1.0}) {
    double prev = 1.0;
    for (int i = 19; i >= 0; --i) {
      const double s2 = i / 20.0;
      const double rho =
          derive(CurvatureContext::with_defaults(std::min(kmax, 0.0) - 0.5, kmax, 0.6, 10, s2)).rho;
      EXPECT_LT(rho, prev);
      prev = rho;
    }
  }
}

TEST(Derive, InvariantsOnRandomGrid) {
  Rng rng(61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const double kmin = -3.0 + 4.0 * u(rng);
    const double kmax = kmin + 2.0 * u(rng);
    const double dmax = kmax > 0 ? kPi / (2 * std::sqrt(kmax)) : 3.0;
    const double D = dmax * (0.01 + 0.98 * u(rng));
    const CurvatureContext ctx =
        CurvatureContext::with_defaults(kmin, kmax, D, 1 + k % 60, 0.999 * u(rng), 0.1 * u(rng));
    const DerivedConstants c = derive(ctx);
    EXPECT_GE(c.C1, 1.0);
    EXPECT_GT(c.C2, 0.0);
    EXPECT_LE(c.C2, 1.0);
    EXPECT_GT(c.rho, 0.0);
    EXPECT_LT(c.rho, 1.0);
    EXPECT_GT(c.alpha, 0.0);
    EXPECT_LE(c.alpha, 1.0);
    EXPECT_GT(c.s_consensus, 0.0);
    EXPECT_LE(c.s_consensus, 0.5);
    EXPECT_GT(c.s_network, 0.0);
    EXPECT_LE(c.C7, 0.0);
    EXPECT_GE(c.C6, 0.0);
    EXPECT_TRUE(std::isfinite(c.C5));
    // Pure: a second evaluation is bit-identical.
    EXPECT_EQ(derive(ctx).entries(), c.entries());
  }
}

TEST(Derive, ContextValidation) {
  const auto code = [](CurvatureContext ctx) {
    try {
      derive(ctx);
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CurvatureContext ok = CurvatureContext::with_defaults(1.0, 1.0, 0.5, 5, 0.5);
  EXPECT_NO_THROW(derive(ok));
  CurvatureContext bad = ok;
  bad.diameter = kPi / 2;
  EXPECT_EQ(code(bad), ErrorCode::DomainViolation);
  bad = ok;
  bad.k_min = 2.0;
  EXPECT_EQ(code(bad), ErrorCode::DomainViolation);
  bad = ok;
  bad.sigma2 = 1.0;
  EXPECT_EQ(code(bad), ErrorCode::DomainViolation);
  bad = ok;
  bad.c4 = -1.0;
  EXPECT_EQ(code(bad), ErrorCode::DomainViolation);
}

TEST(Shrinkage, ThetaAndCoupling) {
  EXPECT_EQ(shrink_theta(0.0, 0.0, 1.0, 0.5), 1.0);
  EXPECT_NEAR(shrink_theta(1.0, 1.0, kPi / 4, kPi / 4), 1.0, 1e-15);
  const double theta = shrink_theta(-1.0, 1.0, 0.5, 0.5);
  EXPECT_NEAR(theta, std::sin(1.0) / std::sinh(1.0), 1e-15);
  EXPECT_NEAR(coupled_shrinkage(0.1, -1.0, 1.0, 0.5, 0.5), 0.1 / (0.5 * theta), 1e-15);
  // Reference sphere setup: tau = delta / r.
  EXPECT_NEAR(coupled_shrinkage(kPi / 50, 1.0, 1.0, kPi / 4, kPi / 4), 0.08, 1e-15);
}

TEST(NetworkErrorBound, Formula) {
  EXPECT_NEAR(network_error_bound(50, 0.1, kPi, 0.9), 2 * std::sqrt(50.0) * 0.1 * kPi / 0.1, 1e-12);
}

// Distortion of the logarithm, (1 + C3 D^2)^-1 d(y, z) <= |Log_x y - Log_x z|
// <= (1 + C4 D^2) d(y, z), with the default C3 = C4 on balls of radius D.
TEST(Calibration, LogDistortionWithDefaultConstants) {
  struct Case {
    Manifold m;
    double r;
  };
  for (const Case &c : {Case{Manifold::sphere(4), kPi / 4}, Case{Manifold::hyperboloid(4), 1.0},
                        Case{Manifold::euclidean(4), 1.0}}) {
    const double k = default_distortion_constant(c.m.k_min(), c.m.k_max());
    const double lo = 1.0 / (1.0 + k * c.r * c.r), hi = 1.0 + k * c.r * c.r;
    const GeodesicBall ball = make_ball(c.m, c.m.origin(), c.r);
    Rng rng(67);
    for (int i = 0; i < 1000; ++i) {
      const Point x = sample_uniform_ball(c.m, ball, rng), y = sample_uniform_ball(c.m, ball, rng),
                  z = sample_uniform_ball(c.m, ball, rng);
      const double d = c.m.dist(y, z);
      const double gap = c.m.norm({x, c.m.log(x, y).coords - c.m.log(x, z).coords});
      EXPECT_GE(gap, lo * d - 1e-12) << c.m.name();
      EXPECT_LE(gap, hi * d + 1e-12) << c.m.name();
    }
  }
}
