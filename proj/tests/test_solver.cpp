#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace hyperwave;

namespace {

const Experiment& fast() {
  static const Experiment ex(fixtures::fast_config());
  return ex;
}

Experiment with(const std::string& key, const std::string& value) {
  auto cfg = fixtures::fast_config();
  cfg.set(key, value);
  return Experiment(cfg);
}

const Experiment::Run& base_run() {
  static const Experiment::Run run = fast().solve_at(1.0);
  return run;
}

double e_distance(const DuhamelSolver& s, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return s.e_norm(a - b);
}

}  // namespace

TEST(Nonlinearity, PowerLaw) {
  const Nonlinearity f(2.7, 0.5, -1);
  EXPECT_EQ(f(0.0), 0.0);
  EXPECT_NEAR(f(2.0), -0.5 * std::pow(2.0, 2.7), 1e-13);
  EXPECT_NEAR(f(-2.0), 0.5 * std::pow(2.0, 2.7), 1e-13);
  EXPECT_THROW(Nonlinearity(1.0, 1.0), Error);
  EXPECT_THROW(Nonlinearity(2.7, 1.0, 0), Error);
}

TEST(Nonlinearity, LipschitzBoundOnSamples) {
  // |F(u) - F(v)| <= b mu |u - v| (|u|^{b-1} + |v|^{b-1})
  const Nonlinearity f(2.7, 1.0);
  for (double u : {-2.0, -0.3, 0.0, 0.4, 1.7})
    for (double v : {-1.1, 0.0, 0.2, 2.5})
      EXPECT_LE(std::abs(f(u) - f(v)), 2.7 * std::abs(u - v) * (std::pow(std::abs(u), 1.7) + std::pow(std::abs(v), 1.7)) + 1e-15);
}

TEST(Solver, ZeroCouplingReproducesLinearFlow) {
  const Experiment ex = with("mu", "0");
  const auto run = ex.solve_at(1.0);
  EXPECT_TRUE(run.traj.converged);
  EXPECT_LE(run.traj.iterations, 2);
  const auto& s = ex.solver();
  const Eigen::MatrixXd lin = s.linear(run.traj.data, s.grid());
  EXPECT_EQ((run.traj.u_hat - lin).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT(s.residual(run.traj), 1e-14);
}

TEST(Solver, GlobalSolveContracts) {
  const auto& run = base_run();
  ASSERT_TRUE(run.traj.converged);
  EXPECT_TRUE(run.diag.ratios_within_L());
  EXPECT_TRUE(run.diag.ball_bound());
  EXPECT_LT(run.diag.L, 1.0);
  EXPECT_NEAR(run.diag.epsilon, 1.0, 1e-9);
  for (std::size_t m = 1; m < run.diag.diffs.size(); ++m) EXPECT_LT(run.diag.diffs[m], run.diag.diffs[m - 1]);
  for (const auto& probe : run.diag.regularity) EXPECT_TRUE(probe.bound_holds) << probe.d << " " << probe.h;
}

TEST(Solver, ResidualSmallAndSensitiveToCorruption) {
  const auto& s = fast().solver();
  const auto& run = base_run();
  EXPECT_LT(s.residual(run.traj), 1e-7);
  auto bad = run.traj;
  const auto k = static_cast<Eigen::Index>(s.grid().size() / 2);
  const auto bump = RadialProfile::sample(fast().radial(), [](double r) { return 1e-2 * std::exp(-r * r); });
  bad.u_hat.col(k) += s.propagator().spectral(bump);
  EXPECT_GT(s.residual(bad), 1e-3);
}

TEST(Solver, DuhamelAtNodeAndOffGrid) {
  const auto& s = fast().solver();
  const auto& run = base_run();
  const double t = s.grid().nodes[10];
  const RadialProfile d = s.duhamel(run.traj, t);
  const Eigen::VectorXd lin = s.linear(run.traj.data, s.grid()).col(10);
  EXPECT_LT((s.propagator().physical(run.traj.u_hat.col(10) - lin).values - d.values).cwiseAbs().maxCoeff(), 1e-9);
  try {
    s.duhamel(run.traj, 0.5 * (s.grid().nodes[10] + s.grid().nodes[11]));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InterpolationRequired);
  }
}

TEST(Solver, ReflectionOfOddDataFlipsSolution) {
  // u0 = 0: the reflected data (0, -u1) give -u because F is odd.
  const auto& s = fast().solver();
  const auto& run = base_run();
  const auto back = s.solve_global(run.data, true).first;
  EXPECT_TRUE(back.reflected);
  EXPECT_LT(e_distance(s, back.u_hat, -run.traj.u_hat), 1e-12);
  for (std::size_t k = 0; k < back.norm_inf.size(); ++k) EXPECT_NEAR(back.norm_inf[k], run.traj.norm_inf[k], 1e-12);
}

TEST(Solver, NonlinearCorrectionLinearInCoupling) {
  double dev[2];
  int i = 0;
  for (const char* mu : {"0.1", "0.05"}) {
    const Experiment ex = with("mu", mu);
    const auto run = ex.solve_at(1.0);
    const auto& s = ex.solver();
    dev[i++] = e_distance(s, run.traj.u_hat, s.linear(run.traj.data, s.grid()));
  }
  EXPECT_NEAR(dev[0] / dev[1], 2.0, 0.05);
}

TEST(Solver, DefocusingSignConverges) {
  const Experiment ex = with("sign", "-1");
  const auto run = ex.solve_at(1.0);
  EXPECT_TRUE(run.traj.converged);
  EXPECT_TRUE(run.diag.ratios_within_L());
}

TEST(Solver, LargeDataDiverges) {
  try {
    fast().solve_at(64.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Divergence);
  }
}

TEST(Solver, AutomaticEpsilonKeepsContractionBelowHalf) {
  const auto run = fast().global_run();
  EXPECT_LT(run.diag.L, 0.5);
  EXPECT_EQ(std::log2(run.epsilon), std::round(std::log2(run.epsilon)));
}

TEST(Solver, LocalSolveSmallData) {
  const auto& s = fast().solver();
  const auto traj = s.solve_local(base_run().data, 1.0);
  EXPECT_TRUE(traj.converged);
  EXPECT_DOUBLE_EQ(traj.grid.t_max(), 1.0);
}

TEST(Solver, LocalSolveShrinksIntervalForLargeData) {
  const auto& s = fast().solver();
  const WaveState big = fast().bump_data(40.0);
  const auto traj = s.solve_local(big, 1.0);
  EXPECT_TRUE(traj.converged);
  EXPECT_LT(traj.grid.t_max(), 1.0);
  SolverOptions opt = s.options();
  opt.local_min_T = 0.5;
  const DuhamelSolver strict(s.propagator(), s.params(), s.nonlinearity(), s.grid(), opt);
  try {
    strict.solve_local(big, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TimeUnderflow);
  }
}

TEST(Solver, MismatchedPowerRejected) {
  const auto& s = fast().solver();
  EXPECT_THROW(DuhamelSolver(s.propagator(), s.params(), Nonlinearity(2.6, 1.0), s.grid()), Error);
}

TEST(Solver, CsvOutputs) {
  const auto& run = base_run();
  const std::string dir = ::testing::TempDir();
  EXPECT_NO_THROW(run.traj.write_csv(dir + "traj.csv"));
  EXPECT_NO_THROW(run.diag.write_csv(dir + "iter.csv"));
  EXPECT_THROW(run.traj.write_csv("/nonexistent/dir/traj.csv"), Error);
}
