#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "hyperwave/geometry.hpp"

using namespace hyperwave;

TEST(Geometry, RejectsDimensionBelowTwo) {
  EXPECT_THROW(HyperbolicSpace(1), Error);
  try {
    surface_measure(1);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidDimension);
  }
}

TEST(Geometry, SurfaceMeasureLowDimensions) {
  EXPECT_NEAR(surface_measure(2), 2.0 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(surface_measure(3), 4.0 * std::numbers::pi, 1e-13);
  EXPECT_NEAR(surface_measure(4), 2.0 * std::numbers::pi * std::numbers::pi, 1e-13);
}

TEST(Geometry, BallVolumeMatchesAdaptiveQuadrature) {
  for (int n : {2, 3, 4, 5})
    for (double R : {1e-4, 0.3, 1.0, 4.0}) {
      const double ref = surface_measure(n) * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                                                  [n](double r) { return std::pow(std::sinh(r), n - 1); }, 0.0, R, 10, 1e-14);
      EXPECT_NEAR(ball_volume(n, R) / ref, 1.0, 1e-11) << "n=" << n << " R=" << R;
    }
}

TEST(Geometry, GridWeightsIntegrateBallVolume) {
  const auto g = RadialGrid::gauss_legendre(3, 5.0, 20);
  EXPECT_NEAR(g->total_volume() / ball_volume(3, 5.0), 1.0, 1e-13);
  const auto u = RadialGrid::uniform(3, 5.0, 2001);
  EXPECT_NEAR(u->total_volume() / ball_volume(3, 5.0), 1.0, 1e-5);
}

TEST(Geometry, ExtraBreakIsANodeBoundary) {
  const auto g = RadialGrid::gauss_legendre(3, 6.0, 7, 8, {2.0});
  double below = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i)
    if (g->nodes[i] < 2.0) below += g->weights[i];
  EXPECT_NEAR(below / ball_volume(3, 2.0), 1.0, 1e-13);
}

TEST(Geometry, SphericalFunctionNormalizedAndSmoothAtSeriesSwitch) {
  EXPECT_DOUBLE_EQ(spherical_function(3, 2.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(spherical_function(3, 0.0, 0.0), 1.0);
  const double eps = kSeriesThreshold;
  for (double lambda : {0.5, 3.0}) {
    const double below = spherical_function(3, lambda, 0.999 * eps);
    const double above = spherical_function(3, lambda, 1.001 * eps);
    EXPECT_NEAR(below, above, 1e-12);
  }
  // lambda -> 0 limit r / sinh r
  EXPECT_NEAR(spherical_function(3, 0.0, 2.0), 2.0 / std::sinh(2.0), 1e-15);
  EXPECT_NEAR(spherical_function(3, 1.5, 2.0), std::sin(3.0) / (1.5 * std::sinh(2.0)), 1e-15);
}

TEST(Geometry, SphericalFunctionOtherDimensionsUnsupported) {
  try {
    spherical_function(4, 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedDimension);
  }
  EXPECT_THROW(spherical_function(3, -1.0, 1.0), Error);
}

TEST(Geometry, ProfileRejectsMismatchedLength) {
  const auto g = RadialGrid::gauss_legendre(3, 4.0, 2);
  EXPECT_THROW(RadialProfile(g, Eigen::VectorXd::Zero(3)), Error);
  const auto other = RadialGrid::gauss_legendre(3, 4.0, 2);
  EXPECT_THROW(require_same_grid(RadialProfile::zero(g), RadialProfile::zero(other)), Error);
}

TEST(Geometry, LaplacianEigenrelationSecondOrder) {
  // -Delta phi_lambda = (lambda^2 + 1) phi_lambda for n = 3
  const double lambda = 1.3;
  double errs[2];
  int idx = 0;
  for (int m : {300, 600}) {
    const auto g = RadialGrid::uniform(3, 6.0, m + 1);
    const auto phi = RadialProfile::sample(g, [&](double r) { return spherical_function(3, lambda, r); });
    const auto lap = apply_radial_laplacian(phi, 3);
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < g->size(); ++i)
      e = std::max(e, std::abs(lap.values[i] + (lambda * lambda + 1.0) * phi.values[i]));
    errs[idx++] = e;
  }
  const double order = std::log2(errs[0] / errs[1]);
  EXPECT_GT(order, 1.8);
  EXPECT_LT(order, 2.2);
}

TEST(Geometry, LaplacianNeedsUniformGrid) {
  const auto g = RadialGrid::gauss_legendre(3, 4.0, 2);
  EXPECT_THROW(apply_radial_laplacian(RadialProfile::zero(g), 3), Error);
}
