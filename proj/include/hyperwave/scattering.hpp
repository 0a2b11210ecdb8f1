#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hyperwave/csv.hpp"
#include "hyperwave/solver.hpp"

namespace hyperwave {

enum class Direction { Plus, Minus };

/// Free data (u0^+, u1^+) approached by the solution, plus the bound on what
/// truncating the time integrals at t_max can have missed.
struct AsymptoticData {
  SpectralState plus;
  double truncation_bound = 0.0;  // in the energy-type norm ||D u0|| + ||u1||
  double tail_amplitude = 0.0;    // sup_{t >= t0} e^{b alpha t} ||F(u(t))||
  Direction direction = Direction::Plus;
};

/// The free solution agreeing with u at +infinity is
///   Wdot(t) (u0 - int W(s) F ds) + W(t) (u1 + int Wdot(s) F ds),
/// integrals over (0, inf), truncated at the end of the time grid. The
/// backward data come from a solve of the reflected problem: if w(t) = u(-t)
/// then u^-(t) = w^+(-t).
inline AsymptoticData asymptotic_data(const DuhamelSolver& solver, const TrajectorySolution& traj, Direction dir,
                                      double horizon_tol = 1e-5) {
  require(traj.grid.nodes == solver.grid().nodes, ErrorCode::IncompatibleGrid, "trajectory is on a different time grid");
  require(traj.reflected == (dir == Direction::Minus), ErrorCode::Precondition,
          "the minus direction needs the reflected trajectory and vice versa");
  const ParameterSet& ps = solver.params();
  const Eigen::MatrixXd f_hat = solver.forcing(traj.u_hat);
  const auto cum = solver.integrator().cumulative(f_hat);
  const Eigen::Index last = f_hat.cols() - 1;

  AsymptoticData out;
  out.direction = dir;
  out.plus.u = traj.data.u - cum.sin_part.col(last);
  out.plus.ut = traj.data.ut + cum.cos_part.col(last);
  if (dir == Direction::Minus) out.plus.ut = -out.plus.ut;

  const auto& tr = solver.transform();
  const double ba = ps.b * ps.alpha;
  for (Eigen::Index k = 0; k <= last; ++k) {
    const double t = traj.grid.nodes[static_cast<std::size_t>(k)];
    if (t < ps.t0) continue;
    const double a = tr.l2_spectral(SpectralProfile(tr.spectral_grid(), f_hat.col(k)));
    out.tail_amplitude = std::max(out.tail_amplitude, std::exp(ba * t) * a);
  }
  // The D u0 and u1 corrections are each bounded by int_{t_max}^inf ||F(s)|| ds.
  out.truncation_bound = 2.0 * out.tail_amplitude * std::exp(-ba * traj.grid.t_max()) / ba;
  require(out.truncation_bound <= horizon_tol, ErrorCode::Horizon,
          "t_max too short: truncation bound " + format_double(out.truncation_bound) + " exceeds " +
              format_double(horizon_tol));
  return out;
}

/// ||D u0|| + ||u1|| in the Plancherel-weighted spectral L^2.
inline double energy_distance(const Propagator& prop, const SpectralState& a, const SpectralState& b) {
  const auto& tr = *prop.transform();
  const SpectralProfile du(tr.spectral_grid(), prop.D(a.u - b.u));
  const SpectralProfile dut(tr.spectral_grid(), a.ut - b.ut);
  return tr.l2_spectral(du) + tr.l2_spectral(dut);
}

struct DefectReport {
  std::vector<double> t;
  std::vector<double> direct;  // ||u(t) - u^+(t)||_{(b+1,d)}
  std::vector<double> tail;    // ||int_t^inf W(s-t) F(u(s)) ds||_{(b+1,d)} on the bisected grid
  std::vector<double> gap;     // ||direct - tail integrand difference||_{(b+1,d)}
  std::vector<double> linear;  // ||linear flow of the data||_{(b+1,d)}
  double max_gap = 0.0;

  void write_csv(const std::string& path, const ParameterSet& ps, double h) const {
    CsvWriter csv(path, {"t", "defect", "weighted_defect", "linear_trace", "tail_defect"});
    for (std::size_t k = 0; k < t.size(); ++k)
      csv.row({t[k], direct[k], std::exp((ps.b * ps.alpha + h) * t[k]) * direct[k],
               std::exp((ps.alpha + h) * t[k]) * linear[k], tail[k]});
  }
};

/// Scattering defect at every node with t >= t_from, computed two ways: the
/// direct difference with the free solution of `plus`, and the tail integral
/// int_t^{t_max} W(s - t) F(u(s)) ds evaluated with the bisected time grid.
inline DefectReport scattering_defect(const DuhamelSolver& solver, const TrajectorySolution& traj,
                                      const AsymptoticData& plus, double d, double t_from) {
  require(!traj.reflected && plus.direction == Direction::Plus, ErrorCode::Precondition,
          "defects are measured forward in time");
  require(t_from >= solver.params().t0 - 1e-12, ErrorCode::Precondition, "defect needs t >= t0");
  const Propagator& prop = solver.propagator();
  const TimeGrid& g = traj.grid;

  // Solution on the bisected grid from the discrete equation, then its forcing.
  const ProductIntegrator& coarse = solver.integrator();
  const Eigen::MatrixXd f_coarse = solver.forcing(traj.u_hat);
  const auto cum_coarse = coarse.cumulative(f_coarse);
  const TimeGrid fine = g.refined();
  const ProductIntegrator fine_integ(fine, prop.omega());
  const Eigen::MatrixXd lin_fine = solver.linear(traj.data, fine);
  Eigen::MatrixXd u_fine(traj.u_hat.rows(), static_cast<Eigen::Index>(fine.size()));
  for (std::size_t k = 0; k < fine.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    u_fine.col(col) = k % 2 == 0 ? Eigen::VectorXd(traj.u_hat.col(col / 2))
                                 : Eigen::VectorXd(lin_fine.col(col) + coarse.duhamel_at(fine.nodes[k], f_coarse, cum_coarse));
  }
  const auto cum = fine_integ.cumulative(solver.forcing(u_fine));
  const Eigen::Index end = cum.cos_part.cols() - 1;

  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.nodes[k] >= t_from - 1e-12) idx.push_back(k);
  const auto m = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd direct(traj.u_hat.rows(), m), tail(traj.u_hat.rows(), m);
  const Eigen::MatrixXd free_plus = linear_trajectory(prop, plus.plus, [&] {
    std::vector<double> ts;
    for (std::size_t k : idx) ts.push_back(g.nodes[k]);
    return ts;
  }());
  const Eigen::MatrixXd lin = linear_trajectory(prop, traj.data, [&] {
    std::vector<double> ts;
    for (std::size_t k : idx) ts.push_back(g.nodes[k]);
    return ts;
  }());
  for (Eigen::Index i = 0; i < m; ++i) {
    const std::size_t k = idx[static_cast<std::size_t>(i)];
    const double t = g.nodes[k];
    const auto fk = static_cast<Eigen::Index>(2 * k);
    direct.col(i) = traj.u_hat.col(static_cast<Eigen::Index>(k)) - free_plus.col(i);
    for (Eigen::Index j = 0; j < direct.rows(); ++j) {
      const double w = prop.omega()[j];
      tail(j, i) = std::cos(w * t) * (cum.sin_part(j, end) - cum.sin_part(j, fk)) -
                   detail::sin_over(w, t) * (cum.cos_part(j, end) - cum.cos_part(j, fk));
    }
  }
  const auto& tr = solver.transform();
  const LorentzExponents e(solver.params().b + 1.0, d);
  DefectReport rep;
  const int threads = solver.options().threads;
  rep.direct = column_norms(tr, direct, e, threads);
  rep.tail = column_norms(tr, tail, e, threads);
  rep.gap = column_norms(tr, direct - tail, e, threads);
  rep.linear = column_norms(tr, lin, e, threads);
  for (std::size_t k : idx) rep.t.push_back(g.nodes[k]);
  for (double v : rep.gap) rep.max_gap = std::max(rep.max_gap, v);
  return rep;
}

/// Least-squares fit of log(defect) against t over a window.
struct DecayFit {
  double t1 = 0.0, t2 = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of the log-linear regression
  double target = 0.0;    // -(b alpha + h)
  int samples = 0;
  bool decayed_to_floor = false;
  bool pass = false;

  void write_csv(const std::string& path) const {
    CsvWriter csv(path, {"t1", "t2", "slope", "intercept", "residual", "target", "samples", "decayed_to_floor", "pass"});
    csv.row({t1, t2, slope, intercept, residual, target, double(samples), decayed_to_floor ? 1.0 : 0.0, pass ? 1.0 : 0.0});
  }
};

inline constexpr double kSlopeTolerance = 0.05;

inline DecayFit decay_rate_fit(const std::vector<double>& t, const std::vector<double>& defect, double t1, double t2,
                               double rate) {
  require(t.size() == defect.size(), ErrorCode::IncompatibleGrid, "times and defects differ in length");
  DecayFit fit;
  fit.t1 = t1;
  fit.t2 = t2;
  fit.target = -rate;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t1 - 1e-12 || t[k] > t2 + 1e-12) continue;
    if (!(defect[k] > 0.0)) {
      fit.decayed_to_floor = true;
      continue;
    }
    xs.push_back(t[k]);
    ys.push_back(std::log(defect[k]));
  }
  fit.samples = static_cast<int>(xs.size());
  if (fit.decayed_to_floor) {
    fit.pass = true;
    return fit;
  }
  require(xs.size() >= 5, ErrorCode::Precondition, "decay fit needs at least 5 samples in the window");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k] / n;
    my += ys[k] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) ss += std::pow(ys[k] - fit.intercept - fit.slope * xs[k], 2);
  fit.residual = std::sqrt(ss / n);
  fit.pass = fit.slope <= fit.target + kSlopeTolerance;
  return fit;
}

/// True when v is nonincreasing over the samples with time in [t1, t2],
/// compared at times at least `spacing` apart. A spacing above the node step
/// keeps cellwise jitter of the discrete weak-type norm out of the verdict.
inline bool decreasing_over(const std::vector<double>& t, const std::vector<double>& v, double t1, double t2,
                            double spacing = 0.0) {
  double prev = std::numeric_limits<double>::infinity();
  double last_t = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < t1 - 1e-12 || t[k] > t2 + 1e-12) continue;
    if (t[k] < last_t + spacing - 1e-12) continue;
    if (v[k] > prev) return false;
    prev = v[k];
    last_t = t[k];
  }
  return true;
}

struct StabilityReport {
  std::vector<double> t;
  std::vector<double> linear_trace;    // e^{(alpha+h)t} ||linear flow of the data difference||
  std::vector<double> solution_trace;  // e^{(alpha+h)t} ||u - u~||
  std::vector<double> tail_trace;      // e^{(alpha+h)t} ||difference of the Duhamel terms||
  bool linear_decreasing = false;
  bool solution_decreasing = false;
  bool identically_zero = false;
  bool audit_holds = false;  // linear <= solution + tail at every sample
  double window_start = 0.0, window_end = 0.0;

  void write_csv(const std::string& path) const {
    CsvWriter csv(path, {"t", "linear_trace", "solution_trace", "tail_trace"});
    for (std::size_t k = 0; k < t.size(); ++k) csv.row({t[k], linear_trace[k], solution_trace[k], tail_trace[k]});
  }
};

/// Weighted difference traces of two solved problems over the tail window
/// [t0 + 1, t_max].
inline StabilityReport stability_traces(const DuhamelSolver& solver, const TrajectorySolution& sol_a,
                                        const TrajectorySolution& sol_b, double h, double d, double spacing = 0.25) {
  const ParameterSet& ps = solver.params();
  require(sol_a.converged && sol_b.converged, ErrorCode::Divergence, "stability solve did not converge");
  const auto& g = solver.grid();
  const Eigen::MatrixXd lin_diff = solver.linear(sol_a.data, g) - solver.linear(sol_b.data, g);
  const Eigen::MatrixXd sol_diff = sol_a.u_hat - sol_b.u_hat;
  const Eigen::MatrixXd tail_diff = sol_diff - lin_diff;
  const auto& tr = solver.transform();
  const LorentzExponents e(ps.b + 1.0, d);
  const int threads = solver.options().threads;
  const auto ln = column_norms(tr, lin_diff, e, threads);
  const auto sn = column_norms(tr, sol_diff, e, threads);
  const auto tn = column_norms(tr, tail_diff, e, threads);

  StabilityReport rep;
  rep.window_start = ps.t0 + 1.0;
  rep.window_end = g.t_max();
  rep.identically_zero = true;
  rep.audit_holds = true;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double t = g.nodes[k];
    if (t < ps.t0) continue;
    const double w = std::exp((ps.alpha + h) * t);
    rep.t.push_back(t);
    rep.linear_trace.push_back(w * ln[k]);
    rep.solution_trace.push_back(w * sn[k]);
    rep.tail_trace.push_back(w * tn[k]);
    if (ln[k] != 0.0 || sn[k] != 0.0) rep.identically_zero = false;
    // Triangle inequality in the Lorentz norm, with the quasi-norm constant.
    const double c = d > ps.b + 1.0 ? std::pow(2.0, 1.0 / (ps.b + 1.0)) : 1.0;
    if (ln[k] > c * (sn[k] + tn[k]) * (1.0 + 1e-12)) rep.audit_holds = false;
  }
  rep.linear_decreasing = decreasing_over(rep.t, rep.linear_trace, rep.window_start, rep.window_end, spacing);
  rep.solution_decreasing = decreasing_over(rep.t, rep.solution_trace, rep.window_start, rep.window_end, spacing);
  return rep;
}

/// Solves both problems, then compares their traces.
inline StabilityReport stability_experiment(const DuhamelSolver& solver, const WaveState& data_a,
                                            const WaveState& data_b, double h, double d, double spacing = 0.25) {
  const auto sol_a = solver.solve_global(data_a).first;
  const auto sol_b = solver.solve_global(data_b).first;
  return stability_traces(solver, sol_a, sol_b, h, d, spacing);
}

}  // namespace hyperwave
