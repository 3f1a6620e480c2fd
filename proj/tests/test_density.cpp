#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cuspfill/density.hpp"
#include "oracles.hpp"

using namespace cuspfill;

namespace {
const auto kStar = LogDensity::punctured();
const auto kDisk = LogDensity::disk();
}  // namespace

TEST(UEval, PuncturedAtInverseE) {
  EXPECT_NEAR(u_eval(kStar, kInvE, 0), 1.0, 1e-15);
  EXPECT_NEAR(u_eval(kStar, kInvE, 1), 0.0, 1e-15);
}

TEST(UEval, PuncturedAtHalfMatchesHighPrecision) {
  EXPECT_NEAR(u_eval(kStar, 0.5, 0), oracle::ustar_d(0.5, 0), 1e-15);
  EXPECT_NEAR(u_eval(kStar, 0.5, 0), 1.0596601011416096, 1e-15);
}

TEST(UEval, AllOrdersMatchHighPrecisionOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.001, 0.999);
  for (int i = 0; i < 200; ++i) {
    const double r = U(rng);
    for (int k = 0; k < 3; ++k) {
      const double a = oracle::ustar_d(r, k), b = oracle::udisk_d(r, k);
      EXPECT_NEAR(u_eval(kStar, r, k), a, 1e-12 * std::max(1.0, std::abs(a))) << "r=" << r << " k=" << k;
      EXPECT_NEAR(u_eval(kDisk, r, k), b, 1e-12 * std::max(1.0, std::abs(b))) << "r=" << r << " k=" << k;
    }
  }
}

TEST(UEval, NearBoundaryStaysAccurate) {
  for (double t : {1e-4, 1e-7, 1e-10}) {
    const double r = 1.0 - t;
    for (int k = 0; k < 3; ++k) {
      const double a = oracle::ustar_d(r, k);
      EXPECT_NEAR(u_eval(kStar, r, k), a, 1e-10 * std::abs(a)) << t << " " << k;
    }
  }
}

TEST(UEval, DerivativesMatchCentralDifferences) {
  const double h = 1e-5;
  for (const auto& d : {kStar, kDisk, LogDensity::disk_shifted(0.3, 1.2)})
    for (double r : linspace(0.05, 0.95, 901)) {
      const double fd1 = (u_eval(d, r + h, 0) - u_eval(d, r - h, 0)) / (2 * h);
      const double fd2 = (u_eval(d, r + h, 1) - u_eval(d, r - h, 1)) / (2 * h);
      EXPECT_NEAR(fd1, u_eval(d, r, 1), 1e-6 * std::max(1.0, std::abs(fd1)));
      EXPECT_NEAR(fd2, u_eval(d, r, 2), 1e-6 * std::max(1.0, std::abs(fd2)));
    }
}

TEST(UEval, SignPatternOfPuncturedDerivatives) {
  for (double r : linspace(1e-4, 1 - 1e-4, 20001)) {
    if (r < kInvE * (1 - 1e-12)) { EXPECT_LT(u_eval(kStar, r, 1), 0.0) << r; }
    if (r > kInvE * (1 + 1e-12)) { EXPECT_GT(u_eval(kStar, r, 1), 0.0) << r; }
    EXPECT_GT(u_eval(kStar, r, 2), 0.0) << r;
  }
}

TEST(UEval, DomainErrors) {
  for (double r : {0.0, -0.1, 1.0, 1.5, 1.0 - 1e-13, std::nan("")})
    EXPECT_THROW(u_eval(kStar, r, 0), Error) << r;
  EXPECT_NO_THROW(u_eval(kDisk, 0.0, 0));
  for (double r : {-0.1, 1.0, 2.0}) EXPECT_THROW(u_eval(kDisk, r, 0), Error) << r;
  EXPECT_THROW(u_eval(kStar, 0.5, 3), Error);
  try {
    u_eval(kStar, 0.0, 0);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(UEval, ShiftedDiskWithRadiusOneIsDiskPlusConstant) {
  const auto s = LogDensity::disk_shifted(0.7);
  for (double r : linspace(0, 0.99, 100)) {
    EXPECT_NEAR(u_eval(s, r, 0), u_eval(kDisk, r, 0) + 0.7, 1e-14);
    EXPECT_DOUBLE_EQ(u_eval(s, r, 1), u_eval(kDisk, r, 1));
    EXPECT_DOUBLE_EQ(u_eval(s, r, 2), u_eval(kDisk, r, 2));
  }
}

TEST(Curvature, HyperbolicOnDenseGrids) {
  double worst = 0;
  for (double r : linspace(0.01, 0.99, 10000)) {
    worst = std::max(worst, std::abs(curvature_radial(kStar, r) + 1));
    worst = std::max(worst, std::abs(curvature_radial(kDisk, r) + 1));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Curvature, MatchesOracleDifferencing) {
  for (double r : {0.05, 0.2, kInvE, 0.6, 0.95}) {
    EXPECT_NEAR(oracle::curvature(oracle::ustar, r), -1.0, 1e-12);
    EXPECT_NEAR(curvature_radial(kStar, r), oracle::curvature(oracle::ustar, r), 1e-12);
  }
}

TEST(Curvature, ShiftScalesCurvature) {
  EXPECT_NEAR(curvature_radial(LogDensity::disk_shifted(std::log(2.0)), 0.3), -0.25, 1e-14);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> C(-2, 2), rho(0.5, 3), frac(0, 0.95);
  for (int i = 0; i < 200; ++i) {
    const double c = C(rng), p = rho(rng), r = std::min(frac(rng) * p, 0.99);
    EXPECT_NEAR(curvature_radial(LogDensity::disk_shifted(c, p), r), -std::exp(-2 * c), 1e-11 * std::exp(-2 * c));
  }
}

TEST(Curvature, LimitAtOrigin) {
  EXPECT_NEAR(curvature_radial(kDisk, 0.0), -1.0, 1e-15);
  EXPECT_NEAR(curvature_radial(LogDensity::disk_shifted(std::log(2.0)), 0.0), -0.25, 1e-15);
  EXPECT_THROW(curvature_radial(kStar, 0.0), Error);
  EXPECT_THROW(curvature_from_jet(0.0, 0.0, 0.1, 1.0), Error);
}

TEST(Area, Examples) {
  EXPECT_NEAR(area_ball(kInvE), kTwoPi, 1e-14);
  EXPECT_NEAR(area_ball(0.5), 9.0647202836543876, 1e-13);
  EXPECT_NEAR(area_ball(std::exp(-2.0)), kPi, 1e-14);
  EXPECT_NEAR(length_horocycle(0.9), 59.635103985112892, 1e-9);
  EXPECT_GT(area_ball(1 - 1e-9), 1e9);
  for (double r : {0.0, 1.0, -0.5, 2.0}) {
    EXPECT_THROW(area_ball(r), Error);
    EXPECT_THROW(length_horocycle(r), Error);
  }
}

TEST(Area, MatchesAreaIntegralQuadrature) {
  for (double r : {0.1, 0.3, kInvE, 0.5, 0.9}) {
    const double ref = oracle::area_ball(r);
    EXPECT_NEAR(area_ball(r) / ref, 1.0, 1e-8) << r;
    EXPECT_EQ(area_ball(r), length_horocycle(r));
  }
}

TEST(Area, LengthMatchesLineIntegral) {
  for (double r : {0.2, 0.5, 0.9}) {
    const double lam = std::exp(u_eval(kStar, r, 0));
    const double len = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        [&](double) { return lam * r; }, 0.0, kTwoPi);
    EXPECT_NEAR(length_horocycle(r) / len, 1.0, 1e-13);
  }
}

TEST(CoveringMap, Examples) {
  const Point a = map_h2_to_pd({0.0, 0.3});
  EXPECT_NEAR(a.x, std::exp(-kTwoPi * 0.3), 1e-16);
  EXPECT_EQ(a.y, 0.0);
  const Point b = map_h2_to_pd({1.0, 0.3});
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  const Point c = map_h2_to_pd({0.25, 1 / kTwoPi});
  EXPECT_NEAR(c.x, 0.0, 1e-16);
  EXPECT_NEAR(c.y, std::exp(-1.0), 1e-16);
  EXPECT_THROW(map_h2_to_pd({0.0, 0.0}), Error);
  EXPECT_THROW(map_h2_to_pd({0.0, -1.0}), Error);
}

TEST(CoveringMap, PeriodicAndMonotone) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> X(-3, 3), Y(0.001, 2);
  for (int i = 0; i < 500; ++i) {
    const double x = X(rng), y = Y(rng);
    const Point p = map_h2_to_pd({x, y}), q = map_h2_to_pd({x + 1, y});
    EXPECT_NEAR(p.x, q.x, 1e-14);
    EXPECT_NEAR(p.y, q.y, 1e-14);
    EXPECT_NEAR(std::hypot(p.x, p.y), std::exp(-kTwoPi * y), 1e-15);
    const Point s = map_h2_to_pd({x, y * 1.001});
    EXPECT_LT(std::hypot(s.x, s.y), std::hypot(p.x, p.y));
  }
}

TEST(FiniteDifference, ConstantFieldIsFlat) {
  Field2D f(5, 5, 1.7);
  EXPECT_EQ(curvature_conformal_fd(f, 0.1, {2, 2}), 0.0);
}

TEST(FiniteDifference, BoundaryIndexRejected) {
  Field2D f(4, 4, 0.0);
  EXPECT_THROW(curvature_conformal_fd(f, 0.1, {0, 1}), Error);
  EXPECT_THROW(curvature_conformal_fd(f, 0.1, {1, 3}), Error);
  EXPECT_THROW(curvature_conformal_fd(f, 0.0, {1, 1}), Error);
}

TEST(FiniteDifference, SecondOrderAgreementWithRadialFormula) {
  struct Case {
    LogDensity d;
    double r;
  };
  for (const auto& cs : {Case{kDisk, 0.4}, Case{kStar, 0.6}}) {
    double prev = 0;
    for (double h : {4e-3, 2e-3, 1e-3}) {
      auto f = sample_field([&](double x, double y) { return u_eval(cs.d, std::hypot(x, y), 0); }, cs.r - h, -h, h, 3, 3);
      const double err = std::abs(curvature_conformal_fd(f, h, {1, 1}) - curvature_radial(cs.d, cs.r));
      EXPECT_LT(err, 10 * h * h);
      if (prev > 0) { EXPECT_NEAR(prev / err, 4.0, 0.5); }
      prev = err;
    }
  }
}
