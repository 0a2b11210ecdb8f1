#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hyperwave/lorentz.hpp"
#include "../tools/selftest.hpp"

using namespace hyperwave;

namespace {

RadialGridPtr grid() {
  static const auto g = RadialGrid::gauss_legendre(3, 10.0, 40, 16, {2.0});
  return g;
}

RadialProfile indicator(double R) {
  return RadialProfile::sample(grid(), [R](double r) { return r < R ? 1.0 : 0.0; });
}

}  // namespace

TEST(Lorentz, ExponentValidation) {
  EXPECT_THROW(LorentzExponents(1.0, 2.0), Error);
  EXPECT_THROW(LorentzExponents(2.0, 0.5), Error);
  EXPECT_THROW(LorentzExponents(kInf, 2.0), Error);
  EXPECT_NO_THROW(LorentzExponents::weak(3.7));
}

TEST(Lorentz, IndicatorClosedForms) {
  const double V = ball_volume(3, 2.0);
  const auto f = indicator(2.0);
  for (double p : {1.5, 3.7, 7.0})
    for (double q : {1.0, 1.5, 3.7, 10.0}) {
      const double exact = std::pow(p / q, 1.0 / q) * std::pow(V, 1.0 / p);
      EXPECT_NEAR(lorentz_norm(f, {p, q}) / exact, 1.0, 1e-12) << p << " " << q;
    }
  EXPECT_NEAR(lorentz_norm(f, LorentzExponents::weak(3.7)) / std::pow(V, 1 / 3.7), 1.0, 1e-12);
}

TEST(Lorentz, WeakNormAgreesWithHeightFormula) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const auto f = tools::random_profile(grid(), rng);
    EXPECT_NEAR(lorentz_norm(f, LorentzExponents::weak(3.7)) / weak_norm_by_heights(f, 3.7), 1.0, 1e-12);
  }
}

TEST(Lorentz, DiagonalEqualsLebesgue) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    const auto f = tools::random_profile(grid(), rng);
    for (double p : {2.0, 3.7}) {
      double s = 0.0;
      for (std::size_t k = 0; k < grid()->size(); ++k) s += grid()->weights[k] * std::pow(std::abs(f.values[k]), p);
      EXPECT_NEAR(lorentz_norm(f, LorentzExponents::lebesgue(p)) / std::pow(s, 1.0 / p), 1.0, 1e-10);
    }
  }
}

TEST(Lorentz, RearrangementIsDecreasingAndEquimeasurable) {
  std::mt19937_64 rng(3);
  const auto f = tools::random_profile(grid(), rng);
  const auto t = decreasing_rearrangement(f);
  for (std::size_t k = 1; k < t.size(); ++k) {
    EXPECT_LE(t.values[k], t.values[k - 1]);
    EXPECT_GT(t.levels[k], t.levels[k - 1]);
  }
  EXPECT_NEAR(t.total_measure() / grid()->total_volume(), 1.0, 1e-12);
  for (int k = 1; k <= 50; ++k) {
    const double h = f.sup_norm() * k / 51.0;
    EXPECT_NEAR(t.distribution(h) / distribution_function(f, h), 1.0, 1e-12);
  }
}

TEST(Lorentz, Homogeneity) {
  std::mt19937_64 rng(9);
  const auto f = tools::random_profile(grid(), rng);
  const RadialProfile g(grid(), -3.0 * f.values);
  for (double q : {2.0, kInf}) EXPECT_NEAR(lorentz_norm(g, {3.7, q}), 3.0 * lorentz_norm(f, {3.7, q}), 1e-12 * lorentz_norm(g, {3.7, q}));
}

TEST(Lorentz, ZeroProfileHasZeroNorm) {
  EXPECT_EQ(lorentz_norm(RadialProfile::zero(grid()), {3.7, 2.0}), 0.0);
  EXPECT_EQ(lorentz_norm(RadialProfile::zero(grid()), LorentzExponents::weak(3.7)), 0.0);
}

TEST(Lorentz, OuterRadiusFlagsDivergence) {
  const auto flat = RadialProfile::sample(grid(), [](double) { return 1.0; });
  EXPECT_TRUE(lorentz_norm_checked(flat, {3.7, 2.0}).divergent);
  EXPECT_FALSE(lorentz_norm_checked(indicator(2.0), {3.7, 2.0}).divergent);
}

TEST(Lorentz, HolderAndInclusion) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const auto f = tools::random_profile(grid(), rng);
    const auto g = tools::random_profile(grid(), rng);
    const auto rep = holder_check(f, g, {3.7, 3.7}, {3.7, kInf}, {1.85, kInf});
    EXPECT_TRUE(rep.holds) << rep.ratio << " vs " << rep.bound;
    EXPECT_TRUE(inclusion_check(f, 3.7, 1.5, 8.0).holds);
  }
}

TEST(Lorentz, HolderRatioStableUnderRefinement) {
  const auto coarse = RadialGrid::gauss_legendre(3, 10.0, 40);
  const auto fine = RadialGrid::gauss_legendre(3, 10.0, 80);
  std::mt19937_64 rng_c(8), rng_f(8);
  double max_c = 0.0, max_f = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto fc = tools::random_profile(coarse, rng_c), gc = tools::random_profile(coarse, rng_c);
    const auto ff = tools::random_profile(fine, rng_f), gf = tools::random_profile(fine, rng_f);
    max_c = std::max(max_c, holder_check(fc, gc, {3.7, 2.0}, {3.7, 2.0}, {1.85, 1.0}).ratio);
    max_f = std::max(max_f, holder_check(ff, gf, {3.7, 2.0}, {3.7, 2.0}, {1.85, 1.0}).ratio);
  }
  EXPECT_TRUE(std::isfinite(max_c));
  EXPECT_NEAR(max_f / max_c, 1.0, 0.05);
}

TEST(Lorentz, SampleLogCoversMeasure) {
  const auto t = decreasing_rearrangement(indicator(2.0));
  // zero cells are not part of the table: it spans the support only
  EXPECT_NEAR(t.total_measure() / ball_volume(3, 2.0), 1.0, 1e-13);
  const auto s = t.sample_log(50);
  ASSERT_EQ(s.size(), 50u);
  EXPECT_NEAR(s.front().first / t.total_measure(), 1e-6, 1e-18);
  for (const auto& [x, v] : s) EXPECT_EQ(v, 1.0) << x;
}
