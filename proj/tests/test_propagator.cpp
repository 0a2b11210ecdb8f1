#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace hyperwave;
using fixtures::small;

namespace {

Propagator make(double c) { return Propagator(small().transform, MassParameter(c, 3)); }

SpectralState gaussian_state(const Propagator& p) {
  return {p.spectral(small().gaussian(0.5, 1.2)), p.spectral(small().gaussian())};
}

double rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Propagator, MassBelowBottomOfSpectrumRejected) {
  try {
    MassParameter(-1.5, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SpectralPositivity);
  }
  EXPECT_TRUE(MassParameter::shifted(3).is_shifted());
  EXPECT_FALSE(MassParameter(0.0, 3).is_shifted());
}

TEST(Propagator, DispersionRelation) {
  EXPECT_DOUBLE_EQ(dispersion_relation(2.0, -1.0, 3), 2.0);
  EXPECT_DOUBLE_EQ(dispersion_relation(0.0, 0.0, 3), 1.0);
  EXPECT_NEAR(dispersion_relation(1.0, 3.0, 3), std::sqrt(5.0), 1e-15);
}

TEST(Propagator, MultipliersAtTimeZero) {
  const auto p = make(-1.0);
  EXPECT_EQ(p.multiplier_W(0.0).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((p.multiplier_Wdot(0.0).array() - 1.0).abs().maxCoeff(), 0.0);
}

TEST(Propagator, WIsOddAndMatchesClosedForm) {
  const auto p = make(0.0);
  const Eigen::VectorXd w = p.multiplier_W(1.7), wm = p.multiplier_W(-1.7);
  EXPECT_LT((w + wm).cwiseAbs().maxCoeff(), 1e-15);
  for (Eigen::Index j = 0; j < w.size(); j += 50) {
    const double om = p.omega()[j];
    EXPECT_NEAR(w[j], std::sin(1.7 * om) / om, 1e-14);
  }
}

TEST(Propagator, ShiftedZeroFrequencyLimit) {
  // omega -> 0 gives W(t) -> t.
  EXPECT_DOUBLE_EQ(detail::sin_over(0.0, 2.5), 2.5);
  EXPECT_NEAR(detail::sin_over(1e-9, 2.5), 2.5, 1e-15);
}

TEST(Propagator, EnergyConservedForBothMasses) {
  for (double c : {0.0, -1.0}) {
    const auto p = make(c);
    const auto s0 = gaussian_state(p);
    const double e0 = p.energy(s0);
    for (double t : {0.3, 2.0, 7.5}) EXPECT_NEAR(p.energy(p.linear_flow(t, s0)) / e0, 1.0, 1e-12) << "c=" << c;
  }
}

TEST(Propagator, GroupProperty) {
  const auto p = make(-1.0);
  const auto s0 = gaussian_state(p);
  const auto a = p.linear_flow(1.1, p.linear_flow(0.4, s0));
  const auto b = p.linear_flow(1.5, s0);
  EXPECT_LT(rel(a.u, b.u), 1e-12);
  EXPECT_LT(rel(a.ut, b.ut), 1e-12);
}

TEST(Propagator, TimeDerivativeOfFlow) {
  const auto p = make(0.0);
  const auto s0 = gaussian_state(p);
  const double t = 0.9, h = 1e-5;
  const Eigen::VectorXd du = (p.linear_flow(t + h, s0).u - p.linear_flow(t - h, s0).u) / (2 * h);
  EXPECT_LT(rel(du, p.linear_flow(t, s0).ut), 1e-8);
}

TEST(Propagator, WdotOverDSingularInShiftedCase) {
  const auto p = make(-1.0);
  const Eigen::VectorXd g = p.spectral(small().gaussian());
  try {
    p.Wdot_over_D(1.0, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularMultiplier);
  }
  const auto q = make(0.0);
  EXPECT_NO_THROW(q.Wdot_over_D(1.0, q.spectral(small().gaussian())));
}

TEST(Propagator, PhysicalRoundTripOfFlow) {
  const auto p = make(0.0);
  const WaveState data{small().gaussian(0.0), small().gaussian()};
  const auto at0 = p.linear_flow(0.0, data);
  EXPECT_LT((at0.ut.values - data.ut.values).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT(at0.u.sup_norm(), 1e-12);
}
