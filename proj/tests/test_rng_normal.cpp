#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <set>

#include "resdep/error.hpp"
#include "resdep/normal.hpp"
#include "resdep/rng.hpp"

using namespace resdep;

TEST(Rng, SameSeedSameStream) {
  Xoshiro256 a(99), b(99);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(Rng, UniformOpenStaysInside) {
  Xoshiro256 g(1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = g.uniform_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  /// mean of n uniforms: sd = sqrt(1/12n)
  EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / (12.0 * n)));
}

TEST(Rng, DerivedSeedsDependOnPairOnly) {
  EXPECT_EQ(derive_seed(5, 17), derive_seed(5, 17));
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 10000; ++r) seen.insert(derive_seed(20240601, r));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Normal, CdfReferenceValues) {
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-16);
  EXPECT_NEAR(normal_cdf(1.96), 0.97500210485177952, 1e-15);
  EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145705, 1e-15);
  EXPECT_NEAR(normal_cdf(-10.0) / 7.6198530241605269e-24, 1.0, 1e-12);
  EXPECT_NEAR(normal_sf(3.0), 1.3498980316300946e-3, 1e-17);
}

TEST(Normal, QuantileReferenceValues) {
  EXPECT_EQ(normal_quantile(0.5), 0.0);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-14);
  EXPECT_NEAR(normal_quantile(0.025), -1.959963984540054, 1e-14);
  EXPECT_NEAR(normal_quantile(1e-10), -6.3613409024040557, 1e-12);
  EXPECT_NEAR(normal_quantile(0.9999), 3.7190164854556804, 1e-13);
  EXPECT_TRUE(std::isinf(normal_quantile(0.0)));
  EXPECT_TRUE(std::isinf(normal_quantile(1.0)));
  EXPECT_THROW(normal_quantile(1.5), DomainError);
}

TEST(Normal, QuantileInvertsCdf) {
  for (double p = 1e-12; p < 1.0; p = p < 0.01 ? p * 3.0 : p + 0.0137) {
    const double x = normal_quantile(p);
    EXPECT_NEAR(normal_cdf(x), p, 1e-10 * std::max(p, 1e-3)) << "p=" << p;
  }
}

namespace {

/// Plackett's identity: d/dr Phi2(h, k; r) = phi2(h, k; r).
double bvn_by_quadrature(double h, double k, double rho) {
  auto density = [&](double r) {
    const double s = 1.0 - r * r;
    return std::exp(-(h * h - 2.0 * r * h * k + k * k) / (2.0 * s)) /
           (2.0 * std::numbers::pi * std::sqrt(s));
  };
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, 0.0, rho, 15, 1e-14);
  return normal_cdf(h) * normal_cdf(k) + integral;
}

}  // namespace

TEST(Normal, BivariateAgainstQuadrature) {
  const double points[] = {-3.0, -1.3, -0.2, 0.0, 0.4, 1.1, 2.5};
  const double rhos[] = {-0.95, -0.7, -0.3, 0.0, 0.2, 0.6, 0.9, 0.95};
  for (double h : points) {
    for (double k : points) {
      for (double rho : rhos) {
        EXPECT_NEAR(bivariate_normal_cdf(h, k, rho), bvn_by_quadrature(h, k, rho), 1e-10)
            << h << " " << k << " " << rho;
      }
    }
  }
}

TEST(Normal, BivariateOrthantClosedForm) {
  for (double rho = -0.99; rho < 1.0; rho += 0.11) {
    EXPECT_NEAR(bivariate_normal_cdf(0.0, 0.0, rho),
                0.25 + std::asin(rho) / (2.0 * std::numbers::pi), 1e-14);
  }
}

TEST(Normal, BivariateLimits) {
  EXPECT_NEAR(bivariate_normal_cdf(0.7, INFINITY, 0.4), normal_cdf(0.7), 1e-15);
  EXPECT_EQ(bivariate_normal_cdf(-INFINITY, 0.3, 0.4), 0.0);
  EXPECT_THROW(bivariate_normal_cdf(0.0, 0.0, 1.0), DomainError);
}
