#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "fixtures.hpp"

using namespace hyperwave;
using fixtures::small;

TEST(Transform, CalibratedConstantIsOne) {
  EXPECT_NEAR(small().transform->constant(), 1.0, 1e-3);
}

TEST(Transform, ConstantStableUnderGridDoubling) {
  const auto a = SphericalTransform::make(RadialGrid::gauss_legendre(3, 12.0, 24), SpectralGrid::gauss_legendre(3, 12.0, 16));
  const auto b = SphericalTransform::make(RadialGrid::gauss_legendre(3, 12.0, 48), SpectralGrid::gauss_legendre(3, 12.0, 32));
  EXPECT_NEAR(a->constant(), b->constant(), 1e-8);
}

TEST(Transform, GaussianForwardMatchesClosedForm) {
  // 4 pi / lambda int_0^inf exp(-r^2) sin(lambda r) sinh(r) dr
  //   = 2 pi^{3/2} exp((1 - lambda^2)/4) sin(lambda/2) / lambda
  const auto& g = small();
  const auto fh = g.transform->forward(g.gaussian());
  for (std::size_t j = 0; j < g.spectral->size(); ++j) {
    const double l = g.spectral->nodes[j];
    const double ref = 2.0 * std::pow(std::numbers::pi, 1.5) * std::exp(0.25 * (1.0 - l * l)) * std::sin(0.5 * l) / l;
    EXPECT_NEAR(fh.values[j], ref, 1e-12) << "lambda=" << l;
  }
}

TEST(Transform, RoundTripAndPlancherel) {
  const auto& g = small();
  for (double w : {0.8, 1.0, 1.5}) {
    const auto f = RadialProfile::sample(g.radial, [w](double r) { return (1.0 + r * r) * std::exp(-(r / w) * (r / w)); });
    const auto fh = g.transform->forward(f);
    const auto back = g.transform->inverse(fh);
    EXPECT_LT((back.values - f.values).cwiseAbs().maxCoeff() / f.sup_norm(), 1e-6);
    EXPECT_NEAR(g.transform->l2_spectral(fh) / g.transform->l2_physical(f), 1.0, 1e-6);
  }
}

TEST(Transform, BatchAgreesWithSingleColumn) {
  const auto& g = small();
  Eigen::MatrixXd cols(g.radial->size(), 2);
  cols.col(0) = g.gaussian().values;
  cols.col(1) = g.gaussian(2.0, 0.8).values;
  const Eigen::MatrixXd fb = g.transform->forward_batch(cols);
  EXPECT_LT((fb.col(1) - g.transform->forward(g.gaussian(2.0, 0.8)).values).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::MatrixXd ib = g.transform->inverse_batch(fb);
  EXPECT_LT((ib - cols).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Transform, UncalibratedPairRaises) {
  const auto& g = small();
  const SphericalTransform raw(g.radial, g.spectral);
  try {
    raw.inverse(SpectralProfile(g.spectral, Eigen::VectorXd::Zero(g.spectral->size())));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CalibrationRequired);
  }
}

TEST(Transform, UnderResolvedGridFailsCalibration) {
  const auto r = RadialGrid::gauss_legendre(3, 12.0, 24);
  const auto s = SpectralGrid::gauss_legendre(3, 1.0, 2);
  try {
    SphericalTransform::make(r, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Resolution);
  }
}

TEST(Transform, BandLimitCheck) {
  const auto& g = small();
  EXPECT_NO_THROW(g.transform->require_band_limited(g.transform->forward(g.gaussian())));
  const auto narrow = g.gaussian(1.0, 0.15);
  EXPECT_THROW(g.transform->require_band_limited(g.transform->forward(narrow)), Error);
}

TEST(Transform, ForeignGridRejected) {
  const auto& g = small();
  const auto other = RadialGrid::gauss_legendre(3, 12.0, 24);
  EXPECT_THROW(g.transform->forward(RadialProfile::zero(other)), Error);
}

TEST(Transform, KernelCsvHasHeaderAndRows) {
  const auto r = RadialGrid::gauss_legendre(3, 6.0, 2, 4);
  const auto s = SpectralGrid::gauss_legendre(3, 6.0, 2, 4);
  const SphericalTransform tr(r, s);
  const std::string path = ::testing::TempDir() + "kernel.csv";
  tr.dump_kernel_csv(path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "r,lambda,phi");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 64);
  std::remove(path.c_str());
}
