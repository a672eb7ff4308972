#include "resist/mp.hpp"
#include "resist/scalar_fns.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace resist;

TEST(Phi, ValueAtZeroIsOne) { EXPECT_EQ(phi(2.0L, 0.0L), 1.0L); }

TEST(Phi, ValueAtQuarterRadiusSquaredOverTwo) {
  for (long double R : {0.1L, 1.0L, 7.0L})
    EXPECT_NEAR(static_cast<double>(phi(R, R * R / 8)), 0.71653131057378925, 1e-15);
}

TEST(Phi, VanishesBeyondSupport) {
  EXPECT_EQ(phi(1.0L, 0.5L + 1), 0.0L);
  EXPECT_EQ(phi_d1(1.0L, 0.6L), 0.0L);
  EXPECT_EQ(phi_d2(1.0L, 0.6L), 0.0L);
}

TEST(Phi, SmoothJunctionAtSupportBoundary) {
  const long double R = 1, t = R * R / 2 - 1e-3L;
  EXPECT_LT(phi(R, t), 1e-100L);
  EXPECT_LT(std::fabs(phi_d1(R, t)), 1e-90L);
  EXPECT_LT(std::fabs(phi_d2(R, t)), 1e-80L);
}

TEST(Phi, DerivativesMatchDifferences) {
  const long double R = 1.7L;
  for (long double t : {0.05L, 0.3L, 0.9L, 1.3L}) {
    const long double h = 1e-6L;
    const long double d1 = (phi(R, t + h) - phi(R, t - h)) / (2 * h);
    const long double d2 = (phi_d1(R, t + h) - phi_d1(R, t - h)) / (2 * h);
    EXPECT_NEAR(static_cast<double>(phi_d1(R, t)), static_cast<double>(d1), 1e-8 * std::max(1.0, std::fabs(static_cast<double>(d1))));
    EXPECT_NEAR(static_cast<double>(phi_d2(R, t)), static_cast<double>(d2), 1e-6 * std::max(1.0, std::fabs(static_cast<double>(d2))));
  }
}

TEST(Budgets, GNormAtOne) {
  EXPECT_NEAR(static_cast<double>(g_norm(1.0L, 1.0L)), 0.0036815995405204329, 1e-17);
}

TEST(Budgets, AOfOne) { EXPECT_NEAR(static_cast<double>(a_of(1.0L, 1.0L)), 1.0 / 236, 1e-18); }

TEST(Budgets, GNormSupremum) {
  const long double sup = g_norm_sup(1.0L);
  EXPECT_NEAR(static_cast<double>(sup), 0.079614590063754361, 1e-17);
  EXPECT_NEAR(static_cast<double>(g_norm(1e6L, 1.0L) / sup), 1.0, 1e-3);
}

TEST(Budgets, GNormIncreasingFromZero) {
  EXPECT_EQ(g_norm(0.0L, 1.0L), 0.0L);
  long double prev = 0;
  for (int i = 1; i < 200; ++i) {
    const long double v = g_norm(0.05L * i, 2.0L);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Budgets, GNormInverseRoundTrip) {
  for (long double sk : {0.25L, 1.0L, 3.0L})
    for (long double R : {1e-4L, 0.1L, 1.0L, 5.0L, 300.0L}) {
      const long double y = g_norm(R, sk);
      EXPECT_NEAR(static_cast<double>(g_norm_inv(y, sk) / R), 1.0, 1e-10);
    }
}

TEST(Budgets, GNormInverseRejectsSupremum) {
  EXPECT_THROW(g_norm_inv(g_norm_sup(1.0L), 1.0L), std::invalid_argument);
  EXPECT_THROW(g_norm_inv(1.0L, 1.0L), std::invalid_argument);
}

TEST(Step, EndpointsAndMidpoint) {
  EXPECT_EQ(step_t(0.0L), 1.0L);
  EXPECT_EQ(step_t(-3.0L), 1.0L);
  EXPECT_EQ(step_t(1.0L), 0.0L);
  EXPECT_EQ(step_t(2.0L), 0.0L);
  EXPECT_NEAR(static_cast<double>(step_t(0.5L)), 0.5, 1e-18);
}

TEST(Step, SymmetryAndDerivativeBounds) {
  for (int i = 1; i < 10000; ++i) {
    const long double tau = i / 10000.0L;
    EXPECT_NEAR(static_cast<double>(step_t(tau) + step_t(1 - tau)), 1.0, 1e-15);
    const long double d1 = step_t_d1(tau), d2 = step_t_d2(tau);
    EXPECT_LE(d1, 0.0L);
    EXPECT_GE(d1, -2.0L);
    EXPECT_LE(std::fabs(d2), 16.0L);
  }
}

TEST(Step, DerivativesMatchDifferences) {
  for (long double tau : {0.1L, 0.35L, 0.5L, 0.8L}) {
    const long double h = 1e-6L;
    EXPECT_NEAR(static_cast<double>(step_t_d1(tau)), static_cast<double>((step_t(tau + h) - step_t(tau - h)) / (2 * h)), 1e-8);
    EXPECT_NEAR(static_cast<double>(step_t_d2(tau)), static_cast<double>((step_t_d1(tau + h) - step_t_d1(tau - h)) / (2 * h)), 1e-6);
  }
}

TEST(TInequality, BoundValues) {
  EXPECT_NEAR(static_cast<double>(t_inequality_bound(9)), -0.23974650020752407, 1e-16);
  EXPECT_NEAR(static_cast<double>(t_inequality_bound(100)), -0.0016986514094383394, 1e-18);
}

TEST(TInequality, HoldsOnGrid) {
  for (long double c : {9.0L, 25.0L, 100.0L, 1e4L})
    EXPECT_GE(t_inequality_check(c), t_inequality_bound(c) - 1e-12L) << "c=" << static_cast<double>(c);
}

TEST(TInequality, RejectsSmallC) { EXPECT_THROW(t_inequality_check(8.0L), std::invalid_argument); }

TEST(TInequality, BoundTendsToZero) {
  EXPECT_LT(t_inequality_bound(1e6L), 0.0L);
  EXPECT_GT(t_inequality_bound(1e6L), -1e-300L);
}

TEST(Mp, PrecisionScopeAndRoundTrip) {
  hp::Precision p(300);
  EXPECT_EQ(hp::working_bits(), 300);
  const hp::Real x = hp::exp(hp::Real(1)) / 3.0;
  const hp::Real y(x.str());
  EXPECT_TRUE(x == y);
  {
    hp::Precision q(128);
    EXPECT_EQ(hp::working_bits(), 128);
    EXPECT_EQ(x.bits(), 300);
  }
  EXPECT_EQ(hp::working_bits(), 300);
}

TEST(Mp, Arithmetic) {
  hp::Precision p(200);
  const hp::Real a(2), b(3);
  EXPECT_NEAR((a * b - a / b).d(), 6 - 2.0 / 3, 1e-15);
  EXPECT_NEAR(hp::log1p(hp::Real(1e-30)).d(), 1e-30, 1e-45);
  EXPECT_NEAR(hp::cosh(hp::Real(1)).d(), std::cosh(1.0), 1e-15);
  EXPECT_EQ(hp::Real(0).sign(), 0);
}
