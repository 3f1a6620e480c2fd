#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "cuspfill/bounds.hpp"
#include "oracles.hpp"

using namespace cuspfill;

namespace {

// Gaps recomputed from the closed forms in 100-digit arithmetic: near r = 1
// the gaps are ~t^2 times quantities of size 1/t^2, so 50 digits run out.
std::array<double, 3> oracle_gaps(double r) {
  using hp = boost::multiprecision::cpp_bin_float_100;
  const hp x = r, h = hp("1e-30");
  auto us = [](const hp& y) { return hp(log(1 / (y * log(1 / y)))); };
  auto ud = [](const hp& y) { return hp(log(2 / (1 - y * y))); };
  auto d1 = [&](auto f) { return (f(x + h) - f(x - h)) / (2 * h); };
  auto d2 = [&](auto f) { return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h); };
  return {static_cast<double>(us(x) - ud(x)), static_cast<double>(1 - d1(us) / d1(ud)),
          static_cast<double>(d2(us) / d2(ud) - 1)};
}

}  // namespace

TEST(TaylorGaps, MatchHighPrecisionOnBothSidesOfTheSeriesSwitch) {
  for (double t : {0.3, 0.05, 1e-3, 2e-4, 9e-5, 1e-6, 1e-8}) {
    const auto g = taylor_gaps(1 - t);
    const auto o = oracle_gaps(1 - t);
    const double scale = t * t;
    EXPECT_NEAR(g.d0 / scale, o[0] / scale, 1e-6) << t;
    EXPECT_NEAR(g.e1 / scale, o[1] / scale, 1e-6) << t;
    EXPECT_NEAR(g.e2 / scale, o[2] / scale, 1e-6) << t;
  }
}

TEST(TaylorGaps, LeadingCoefficients) {
  const double t = 1e-7;
  const auto g = taylor_gaps(1 - t);
  EXPECT_NEAR(g.d0 / (t * t), 1.0 / 6, 1e-6);
  EXPECT_NEAR(g.e1 / (t * t), 1.0 / 3, 1e-6);
  EXPECT_NEAR(g.e2 / (t * t), 1.0 / 3, 1e-6);
}

TEST(TaylorBounds, HoldsForPointFourAboveReportedRadius) {
  const auto rep = verify_taylor_bounds(0.4, 0.7, 4000);
  EXPECT_FALSE(rep.holds());
  EXPECT_LT(rep.r_taylor, 0.95);
  EXPECT_GT(rep.r_taylor, 0.9);
  const auto above = verify_taylor_bounds(0.4, rep.r_taylor, 4000);
  EXPECT_TRUE(above.holds()) << above.max_violation;
  ASSERT_EQ(rep.witnesses.size(), 3u);
}

TEST(TaylorBounds, RejectsConstantsNotAboveOneThird) {
  for (double A : {0.30, 1.0 / 3, 0.0, -1.0}) {
    try {
      verify_taylor_bounds(A, 0.9, 100);
      ADD_FAILURE() << A;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
  }
  EXPECT_THROW(verify_taylor_bounds(0.4, 0.3, 100), Error);
  EXPECT_THROW(verify_taylor_bounds(0.4, 0.9, 1), Error);
}

TEST(TaylorBounds, JustAboveOneThirdFailsNearTheEdgeOfTheGrid) {
  const auto rep = verify_taylor_bounds(1.0 / 3 + 5e-4, 0.95, 2000);
  EXPECT_FALSE(rep.holds());
  EXPECT_GT(rep.r_taylor, 0.999);
  EXPECT_TRUE(verify_taylor_bounds(1.0 / 3 + 5e-4, rep.r_taylor, 2000).holds());
}

TEST(TaylorBounds, PointThreeFourHoldsOnlyCloserToTheBoundary) {
  const auto rep = verify_taylor_bounds(0.34, 0.95, 2000);
  EXPECT_FALSE(rep.holds());
  EXPECT_GT(rep.r_taylor, 0.99);
  EXPECT_LT(rep.r_taylor, 0.996);
  EXPECT_TRUE(verify_taylor_bounds(0.34, rep.r_taylor, 2000).holds());
}

TEST(TaylorBounds, RadiusDecreasesWithA) {
  double prev = 1.0;
  for (double A : {0.34, 0.36, 0.4, 0.5, 0.7}) {
    const double r = verify_taylor_bounds(A, 0.5, 3000).r_taylor;
    EXPECT_LE(r, prev) << A;
    prev = r;
  }
}

TEST(AsRatio, Examples) {
  EXPECT_NEAR(as_ratio(0.9), static_cast<double>(oracle::as_ratio(0.9)), 1e-15);
  EXPECT_NEAR(as_ratio(kInvE), std::pow(1 - std::exp(-2.0), 2) / (4 * std::exp(-2.0)), 1e-14);
  EXPECT_THROW(as_ratio(0.0), Error);
  EXPECT_THROW(as_ratio(1.0), Error);
}

TEST(AsRatio, ExceedsOneOnTheUnitInterval) {
  for (double r : linspace(1e-3, 1 - 1e-6, 5000)) EXPECT_GT(as_ratio(r), 1.0) << r;
}

TEST(AsResidual, MatchesHighPrecision) {
  for (double t : {0.3, 0.1, 0.02, 0.011, 0.009, 1e-3, 1e-5, 1e-6}) {
    const double ref = oracle::as_residual(1 - t);
    EXPECT_NEAR(as_residual(1 - t) / ref, 1.0, 1e-8) << t;
  }
  EXPECT_NEAR(as_residual(1 - 1e-6), oracle::as_residual(1 - 1e-6), 1e-24);
}

TEST(AsExpansion, FittedConstantIsStable) {
  const auto rep = verify_as_expansion(0.9, 2000);
  EXPECT_TRUE(rep.holds());
  EXPECT_NEAR(rep.fitted_k, rep.fitted_k_refined, 1e-3 * rep.fitted_k);
  EXPECT_GT(rep.fitted_k, 1.0 / 3);
  EXPECT_LT(rep.fitted_k, 0.5);
  // Every residual on an independent grid is covered by the fit.
  for (double t : logspace(1e-6, 0.1, 777)) {
    const double res = oracle::as_residual(1 - t);
    EXPECT_LE(std::abs(res), rep.fitted_k * t * t * t * (1 + 1e-3)) << t;
  }
}

TEST(MinRadius, MatchesHighPrecisionBisection) {
  for (double eps : {0.3, 0.1, 1e-2, 1e-3, 1e-4, 1e-6}) {
    EXPECT_NEAR(min_radius_for_eps(eps), oracle::min_radius(eps), 1e-12) << eps;
    EXPECT_NEAR(as_ratio(min_radius_for_eps(eps)), 1 + eps, 1e-10 * eps + 1e-13);
  }
}

TEST(MinRadius, MonotoneInEps) {
  double prev = 1.0;
  for (double eps : logspace(1e-6, 0.37, 200)) {
    const double r = min_radius_for_eps(eps);
    EXPECT_LT(r, prev);
    EXPECT_GT(r, kInvE);
    prev = r;
  }
  EXPECT_THROW(min_radius_for_eps(0.0), Error);
  EXPECT_THROW(min_radius_for_eps(0.6), Error);
}

TEST(MinRadius, ScaledDistanceApproachesRootThree) {
  EXPECT_NEAR(c2_empirical(1e-4) / std::sqrt(3.0), 1.0, 0.01);
  EXPECT_NEAR(c2_empirical(1e-6) / std::sqrt(3.0), 1.0, 1e-3);
  double prev = 0;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const double c = c2_empirical(eps);
    EXPECT_GT(c, prev);
    EXPECT_LT(c, std::sqrt(3.0));
    prev = c;
  }
}

TEST(ThetaGap, MatchesHighPrecision) {
  for (double th : {1e-3, 0.05, 0.3, 0.8, 1.0, 1.5})
    EXPECT_NEAR(theta_gap(th), oracle::theta_gap(th), 1e-15 + 1e-13 * std::abs(oracle::theta_gap(th))) << th;
  EXPECT_THROW(theta_gap(0.0), Error);
  EXPECT_THROW(theta_gap(kPi / 2), Error);
}

TEST(ThetaGap, QuarticRatioIsNearlyConstant) {
  const double a = oracle::theta_gap(0.05) / std::pow(0.05, 4);
  const double b = oracle::theta_gap(0.1) / std::pow(0.1, 4);
  EXPECT_LT(std::abs(a - b) / std::max(a, b), 0.2);
  EXPECT_NEAR(theta_gap(0.05) / std::pow(0.05, 4), a, 1e-4 * a);
  EXPECT_NEAR(theta_gap(0.1) / std::pow(0.1, 4), b, 1e-6 * b);
}

TEST(ThetaGap, DerivativesAtZero) {
  for (int k = 1; k <= 3; ++k) EXPECT_LT(std::abs(theta_gap_derivative(k).value), 1e-6) << k;
  EXPECT_NEAR(theta_gap_derivative(4).value, 3.0, 1e-5);
}

TEST(ThetaGap, QuarticReport) {
  const auto rep = verify_theta_quartic();
  EXPECT_TRUE(rep.holds()) << rep.max_violation;
  EXPECT_NEAR(rep.limit, 3.0, 1e-5);
  EXPECT_LT(rep.limit_spread, 5e-4 * rep.limit);
  EXPECT_EQ(rep.witnesses.size(), 4u);
}
