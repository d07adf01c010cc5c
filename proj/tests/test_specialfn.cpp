#include <gtest/gtest.h>

#include <boost/math/special_functions/spherical_harmonic.hpp>
#include <cmath>
#include <numbers>

#include "heatbasis/domain.hpp"
#include "heatbasis/specialfn.hpp"
#include "oracles.hpp"

using namespace heatbasis;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(BesselJ, Basics) {
  EXPECT_EQ(bessel_j(0, 0), 1.0);
  EXPECT_EQ(bessel_j(2.5, 0), 0.0);
  EXPECT_NEAR(bessel_j(0.5, kPi / 2), 2 / kPi, 1e-12);
  EXPECT_NEAR(bessel_j(0, 2.404825557695773), 0.0, 1e-10);
}

TEST(BesselJ, HalfOrderClosedForm) {
  for (int i = 0; i < 50; ++i) {
    const double x = 0.1 + (20.0 - 0.1) * (i + 0.5) / 50;
    EXPECT_NEAR(bessel_j(0.5, x), std::sqrt(2 / (kPi * x)) * std::sin(x), 1e-12) << x;
  }
}

TEST(BesselJ, MatchesMultiprecisionSeries) {
  for (double nu : {0.0, 0.5, 1.0, 2.5, 3.0, 7.0, 10.0})
    for (double x = 0.05; x <= 30.0; x += 0.37) {
      const double ref = static_cast<double>(oracle::bessel_j(nu, x));
      EXPECT_NEAR(bessel_j(nu, x), ref, 1e-13) << nu << " " << x;
    }
}

TEST(BesselJ, Errors) {
  EXPECT_THROW(bessel_j(-1, 1), InvalidArgument);
  EXPECT_THROW(bessel_j(1, -1), InvalidArgument);
  EXPECT_THROW(bessel_j(1000, 1), OutOfRange);
  EXPECT_THROW(bessel_j(1, 1e7), OutOfRange);
}

TEST(BesselJ, ThreeTermRecurrence) {
  for (double nu = 1.0; nu <= 10.0; nu += 0.5)
    for (double x = 0.1; x <= 30.0; x += 0.1) {
      const double a = bessel_j(nu - 1, x), b = bessel_j(nu + 1, x), c = 2 * nu / x * bessel_j(nu, x);
      const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
      EXPECT_LE(std::abs(a + b - c), 1e-9 * scale) << nu << " " << x;
    }
}

TEST(BesselJPrime, Identities) {
  EXPECT_EQ(bessel_j_prime(0, 0), 0.0);
  EXPECT_NEAR(bessel_j_prime(0, 1), -bessel_j(1, 1), 1e-14);
  EXPECT_NEAR(bessel_j_prime(1, 1.8411837813406593), 0.0, 1e-9);
  EXPECT_THROW(bessel_j_prime(0.5, 0.0), DomainError);
  for (double nu : {0.0, 0.5, 1.0, 2.5, 4.0})
    for (double x = 0.2; x <= 25.0; x += 0.9)
      EXPECT_NEAR(bessel_j_prime(nu, x), static_cast<double>(oracle::bessel_j_prime(nu, x)), 1e-12) << nu << " " << x;
}

TEST(BesselJSecond, SatisfiesBesselEquation) {
  for (double nu : {0.0, 0.5, 1.0, 2.5, 4.0})
    for (double x = 0.2; x <= 25.0; x += 0.7) {
      const double lhs = x * x * bessel_j_second(nu, x) + x * bessel_j_prime(nu, x) + (x * x - nu * nu) * bessel_j(nu, x);
      EXPECT_NEAR(lhs, 0.0, 1e-12 * std::max(1.0, x * x)) << nu << " " << x;
    }
}

TEST(BesselZero, MatchesBisectionOracle) {
  for (double nu : {0.0, 1.0})
    for (int m = 1; m <= 3; ++m) {
      EXPECT_NEAR(bessel_zero(nu, m, ZeroKind::Function), oracle::bessel_zero(nu, m, false), 1e-9) << nu << " " << m;
      EXPECT_NEAR(bessel_zero(nu, m, ZeroKind::Derivative), oracle::bessel_zero(nu, m, true), 1e-9) << nu << " " << m;
    }
  for (double nu : {0.5, 2.0, 2.5, 4.0})
    for (int m = 1; m <= 4; ++m) {
      EXPECT_NEAR(bessel_zero(nu, m, ZeroKind::Function), oracle::bessel_zero(nu, m, false), 1e-9) << nu << " " << m;
      EXPECT_NEAR(bessel_zero(nu, m, ZeroKind::Derivative), oracle::bessel_zero(nu, m, true), 1e-9) << nu << " " << m;
    }
}

TEST(BesselZero, KnownValues) {
  EXPECT_NEAR(bessel_zero(0, 1, ZeroKind::Function), 2.404825557695773, 1e-9);
  EXPECT_NEAR(bessel_zero(1, 1, ZeroKind::Function), 3.831705970207512, 1e-9);
  EXPECT_NEAR(bessel_zero(0, 1, ZeroKind::Derivative), 3.831705970207512, 1e-9);
  for (int m = 1; m <= 5; ++m) EXPECT_NEAR(bessel_zero(0.5, m, ZeroKind::Function), m * kPi, 1e-10);
  EXPECT_THROW(bessel_zero(0, 0, ZeroKind::Function), InvalidArgument);
}

TEST(BesselZero, MonotoneAndInterlacing) {
  for (double nu = 0.0; nu <= 6.0; nu += 0.5) {
    double prev = 0.0;
    for (int m = 1; m <= 6; ++m) {
      const double z = bessel_zero(nu, m, ZeroKind::Function);
      EXPECT_GT(z, prev);
      const double next = bessel_zero(nu + 1, m, ZeroKind::Function);
      EXPECT_LT(z, next);
      EXPECT_LT(next, bessel_zero(nu, m + 1, ZeroKind::Function));
      prev = z;
    }
  }
}

TEST(BallNeumannZero, PlanarCaseIsDerivativeZero) {
  for (double p : {0.0, 1.0, 3.0})
    for (int m = 1; m <= 3; ++m) EXPECT_EQ(ball_neumann_zero(2, p, m), bessel_zero(p, m, ZeroKind::Derivative));
}

TEST(BallNeumannZero, SphericalCaseMatchesOracle) {
  // k = 0: tan z = z; k = 1: first extremum of j_1.
  EXPECT_NEAR(ball_neumann_zero(3, 0.5, 1), 4.493409457909064, 1e-10);
  EXPECT_NEAR(ball_neumann_zero(3, 0.5, 2), 7.725251836937707, 1e-10);
  EXPECT_NEAR(ball_neumann_zero(3, 1.5, 1), 2.081575977818101, 1e-10);
  for (int k = 0; k <= 4; ++k)
    for (int m = 1; m <= 3; ++m) {
      const double p = k + 0.5;
      const double ref = oracle::scan_zero(
          [&](const oracle::Real& z) { return z * oracle::bessel_j_prime(p, z) - oracle::bessel_j(p, z) / 2; }, m);
      EXPECT_NEAR(ball_neumann_zero(3, p, m), ref, 1e-9) << k << " " << m;
    }
  EXPECT_THROW(ball_neumann_zero(1, 0.5, 1), InvalidArgument);
  EXPECT_THROW(ball_neumann_zero(3, 0.5, 0), InvalidArgument);
}

TEST(HarmonicDimension, FormulaAndSpecialCases) {
  EXPECT_EQ(harmonic_dimension(3, 0), 1);
  EXPECT_EQ(harmonic_dimension(3, 2), 5);
  EXPECT_EQ(harmonic_dimension(2, 3), 2);
  EXPECT_EQ(harmonic_dimension(2, 0), 1);
  for (int k = 0; k <= 20; ++k) EXPECT_EQ(harmonic_dimension(3, k), 2 * k + 1) << k;
  for (int k = 1; k <= 20; ++k) EXPECT_EQ(harmonic_dimension(2, k), 2) << k;
  EXPECT_THROW(harmonic_dimension(4, 1), InvalidArgument);
  EXPECT_THROW(harmonic_dimension(1, 1), InvalidArgument);
  EXPECT_THROW(HarmonicIndex(3, 2, 6), InvalidArgument);
  EXPECT_THROW(HarmonicIndex(2, 0, 2), InvalidArgument);
}

TEST(SphericalHarmonic, CircleValues) {
  for (double th : {0.0, 0.7, 2.0, -1.3})
    EXPECT_NEAR(spherical_harmonic({2, 0, 1}, {std::cos(th), std::sin(th), 0}), 1 / std::sqrt(2 * kPi), 1e-15);
  const auto circle = detail::sphere_rule(2, 64);
  double s = 0.0;
  for (std::size_t i = 0; i < circle.points.size(); ++i)
    s += circle.weights[i] * spherical_harmonic({2, 2, 1}, circle.points[i]) * spherical_harmonic({2, 2, 2}, circle.points[i]);
  EXPECT_NEAR(s, 0.0, 1e-12);
  EXPECT_THROW(spherical_harmonic({2, 1, 1}, {1.1, 0, 0}), InvalidArgument);
}

namespace {

std::vector<HarmonicIndex> all_harmonics(int n, int kmax) {
  std::vector<HarmonicIndex> out;
  for (int k = 0; k <= kmax; ++k)
    for (int j = 1; j <= harmonic_dimension(n, k); ++j) out.emplace_back(n, k, j);
  return out;
}

double max_gram_deviation(int n, int kmax, int angular) {
  const auto hs = all_harmonics(n, kmax);
  const auto rule = detail::sphere_rule(n, angular);
  double worst = 0.0;
  for (std::size_t a = 0; a < hs.size(); ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < rule.points.size(); ++i)
        s += rule.weights[i] * spherical_harmonic(hs[a], rule.points[i]) * spherical_harmonic(hs[b], rule.points[i]);
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace

TEST(SphericalHarmonic, OrthonormalOnSphereAndCircle) {
  EXPECT_LT(max_gram_deviation(3, 4, 12), 1e-8);
  EXPECT_LT(max_gram_deviation(3, 6, 12), 1e-8);
  EXPECT_LT(max_gram_deviation(2, 6, 32), 1e-8);
}

TEST(SphericalHarmonic, AgreesWithBoostUpToPhaseConvention) {
  // Boost includes the Condon–Shortley phase; the real harmonics here
  // are √2·(−1)^m·Re/Im Y_k^m for m > 0.
  for (int k = 0; k <= 5; ++k)
    for (int j = 1; j <= 2 * k + 1; ++j) {
      const HarmonicIndex h(3, k, j);
      const AzimuthalOrder o = azimuthal_order(h);
      for (double theta : {0.3, 1.1, 2.5})
        for (double phi : {-2.0, 0.4, 1.9}) {
          const std::array<double, 3> dir{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                                          std::cos(theta)};
          double ref = o.is_sin ? boost::math::spherical_harmonic_i(k, o.m, theta, phi)
                                : boost::math::spherical_harmonic_r(k, o.m, theta, phi);
          if (o.m > 0) ref *= std::numbers::sqrt2 * (o.m % 2 ? -1.0 : 1.0);
          EXPECT_NEAR(spherical_harmonic(h, dir), ref, 1e-12) << k << " " << j;
        }
    }
}

TEST(RadialOde, StandardOrderSolvesTheEquation) {
  EXPECT_LT(std::abs(radial_ode_residual(3, 0, 0.5, 1.0, 1.0)), 1e-10);
  double worst = 0.0;
  for (double r = 0.1; r < 3.0; r += 0.05) worst = std::max(worst, std::abs(radial_ode_residual(2, 1, 1.0, 1.0, r)));
  EXPECT_LT(worst, 1e-9);
  for (int n : {2, 3})
    for (int k = 0; k <= 4; ++k)
      for (double lam : {0.5, 1.0, 7.3})
        for (double r = 0.1; r < 3.0; r += 0.1)
          EXPECT_LT(std::abs(radial_ode_residual(n, k, k + 0.5 * (n - 2), lam, r)), 1e-9) << n << " " << k << " " << r;
}

TEST(RadialOde, PrintedOrderFails) {
  const double printed = std::sqrt(0.25 + 36.0);
  double worst = 0.0;
  for (double r = 0.1; r < 3.0; r += 0.05) worst = std::max(worst, std::abs(radial_ode_residual(3, 2, printed, 1.0, r)));
  EXPECT_GT(worst, 1e-3);
  EXPECT_THROW(radial_ode_residual(3, 2, 2.5, 1.0, 0.0), InvalidArgument);
}
