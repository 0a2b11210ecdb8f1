#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

#include "hyperwave/time_grid.hpp"

using namespace hyperwave;

namespace {

Eigen::VectorXd omegas() {
  Eigen::VectorXd w(4);
  w << 0.0, 0.7, 2.0, 6.5;
  return w;
}

Eigen::MatrixXd sample(const TimeGrid& g, double (*f)(double)) {
  Eigen::MatrixXd out(4, static_cast<Eigen::Index>(g.size()));
  for (std::size_t k = 0; k < g.size(); ++k) out.col(static_cast<Eigen::Index>(k)).setConstant(f(g.nodes[k]));
  return out;
}

double smooth(double s) { return std::exp(-s) * std::cos(2.0 * s); }

double duhamel_ref(double omega, double t, double (*f)(double)) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double s) { return detail::sin_over(omega, t - s) * f(s); }, 0.0, t, 15, 1e-15);
}

double max_error(int degree, int intervals) {
  const TimeGrid g = TimeGrid::graded(2.0, 2.0, intervals, 0, 1.0, degree);
  const ProductIntegrator integ(g, omegas());
  const Eigen::MatrixXd d = integ.duhamel(sample(g, smooth));
  double e = 0.0;
  for (std::size_t k = 0; k < g.size(); k += 4)
    for (Eigen::Index j = 0; j < 4; ++j)
      e = std::max(e, std::abs(d(j, static_cast<Eigen::Index>(k)) - duhamel_ref(omegas()[j], g.nodes[k], smooth)));
  return e;
}

}  // namespace

TEST(TimeGrid, GradedStructure) {
  const auto g = TimeGrid::graded(1.0, 10.0, 10, 50, 2.0, 4);
  EXPECT_EQ(g.nodes.front(), 0.0);
  EXPECT_EQ(g.t_max(), 10.0);
  EXPECT_EQ(g.intervals() % 4, 0u);
  EXPECT_EQ(g.intervals(), 12u + 52u);  // both counts rounded up to multiples of 4
  EXPECT_NO_THROW(g.index_of(1.0));
  for (std::size_t k = 1; k < g.size(); ++k) EXPECT_GT(g.nodes[k], g.nodes[k - 1]);
  EXPECT_NEAR(g.nodes[1], std::pow(1.0 / 12, 2), 1e-15);
}

TEST(TimeGrid, RefinedKeepsOldNodesAtEvenIndices) {
  const auto g = TimeGrid::graded(1.0, 3.0, 6, 6, 2.0, 3);
  const auto f = g.refined();
  ASSERT_EQ(f.size(), 2 * g.size() - 1);
  EXPECT_EQ(f.refinement, 1);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(f.nodes[2 * k], g.nodes[k]);
}

TEST(TimeGrid, OffGridTimeRaises) {
  const auto g = TimeGrid::graded(1.0, 3.0, 6, 6, 2.0, 3);
  try {
    g.index_of(0.123456);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InterpolationRequired);
  }
}

TEST(TimeGrid, InvalidArguments) {
  EXPECT_THROW(TimeGrid::graded(1.0, 2.0, 4, 4, 0.5), Error);
  EXPECT_THROW(TimeGrid::graded(1.0, 2.0, 4, 4, 2.0, 7), Error);
  TimeGrid ragged;
  ragged.nodes = {0.0, 0.5, 1.0};
  ragged.degree = 3;
  EXPECT_THROW(ProductIntegrator(ragged, omegas()), Error);
}

TEST(ProductIntegrator, ConstantForcingClosedForm) {
  // int_0^t sin((t-s) w)/w ds = (1 - cos(w t))/w^2, and t^2/2 at w = 0
  for (int degree : {1, 3, 4}) {
    const auto g = TimeGrid::graded(1.0, 8.0, 8, 40, 2.0, degree);
    const ProductIntegrator integ(g, omegas());
    const Eigen::MatrixXd d = integ.duhamel(Eigen::MatrixXd::Ones(4, static_cast<Eigen::Index>(g.size())));
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double t = g.nodes[k];
      for (Eigen::Index j = 0; j < 4; ++j) {
        const double w = omegas()[j];
        const double ref = w == 0.0 ? 0.5 * t * t : (1.0 - std::cos(w * t)) / (w * w);
        EXPECT_NEAR(d(j, static_cast<Eigen::Index>(k)), ref, 1e-13) << "degree " << degree << " t " << t;
      }
    }
  }
}

TEST(ProductIntegrator, PolynomialOfPanelDegreeIsExact) {
  const auto g = TimeGrid::graded(1.0, 3.0, 6, 12, 1.0, 3);
  const ProductIntegrator integ(g, omegas());
  auto cubic = [](double s) { return 1.0 - 2.0 * s + 0.5 * s * s * s; };
  const Eigen::MatrixXd d = integ.duhamel(sample(g, +cubic));
  for (std::size_t k = 0; k < g.size(); k += 3)
    for (Eigen::Index j = 0; j < 4; ++j)
      EXPECT_NEAR(d(j, static_cast<Eigen::Index>(k)), duhamel_ref(omegas()[j], g.nodes[k], +cubic), 1e-12);
}

TEST(ProductIntegrator, ConvergenceOrders) {
  const double o1 = std::log2(max_error(1, 40) / max_error(1, 80));
  EXPECT_GT(o1, 1.8);
  EXPECT_LT(o1, 2.2);
  const double o3 = std::log2(max_error(3, 24) / max_error(3, 48));
  EXPECT_GT(o3, 3.7);
}

TEST(ProductIntegrator, OffNodeEvaluationUsesSameInterpolant) {
  const auto g = TimeGrid::graded(1.0, 2.0, 32, 32, 2.0, 4);
  const ProductIntegrator integ(g, omegas());
  const Eigen::MatrixXd f = sample(g, smooth);
  const Eigen::MatrixXd d = integ.duhamel(f);
  for (std::size_t k = 0; k < g.size(); ++k)
    EXPECT_LT((integ.duhamel_at(g.nodes[k], f) - d.col(static_cast<Eigen::Index>(k))).cwiseAbs().maxCoeff(), 1e-14);
  const double t = 0.5 * (g.nodes[45] + g.nodes[46]);
  const Eigen::VectorXd v = integ.duhamel_at(t, f);
  for (Eigen::Index j = 0; j < 4; ++j) EXPECT_NEAR(v[j], duhamel_ref(omegas()[j], t, smooth), 1e-6);
  EXPECT_THROW(integ.duhamel_at(2.5, f), Error);
}
