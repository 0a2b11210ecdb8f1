#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hyperwave/csv.hpp"
#include "hyperwave/estimates.hpp"
#include "hyperwave/time_grid.hpp"

namespace hyperwave {

/// F(u) = sign * mu * |u|^{b-1} u.
struct Nonlinearity {
  double b = 2.7;
  double mu = 1.0;
  int sign = 1;

  Nonlinearity() = default;
  Nonlinearity(double b_, double mu_, int sign_ = 1) : b(b_), mu(mu_), sign(sign_) {
    require(b > 1.0, ErrorCode::Domain, "nonlinearity power must exceed 1");
    require(sign == 1 || sign == -1, ErrorCode::Domain, "nonlinearity sign must be +1 or -1");
  }

  double operator()(double u) const {
    const double a = std::abs(u);
    return a == 0.0 ? 0.0 : sign * mu * std::pow(a, b - 1.0) * u;
  }
};

inline RadialProfile evaluate_F(const RadialProfile& u, const Nonlinearity& nl) {
  return RadialProfile(u.grid, u.values.unaryExpr([&nl](double x) { return nl(x); }));
}

/// A regularity probe: the iterate norms in E^d_{alpha+h, alpha~+h}.
struct RegularityTrace {
  double d = kInf;
  double h = 0.0;
  std::vector<double> gamma;  // Gamma^d_{m,h}, m = 1, 2, ...
  double K = 0.0;             // K_{d,h}
  double L = 0.0;             // K_{d,h} (2 eps)^{b-1}
  bool bound_holds = false;   // Gamma_m <= Gamma_1 / (1 - L) for every m
};

struct ContractionDiagnostics {
  double K_measured = 0.0;
  double epsilon = 0.0;  // data norm of the run
  double L = 0.0;        // K 2^b eps^{b-1}
  double solution_norm = 0.0;
  std::vector<double> diffs;   // ||v_{m+1} - v_m||_E
  std::vector<double> ratios;  // diffs[m] / diffs[m-1]
  std::vector<double> iterate_norms;
  std::vector<RegularityTrace> regularity;

  bool ratios_within_L() const {
    for (double r : ratios)
      if (r > L) return false;
    return true;
  }
  bool ball_bound() const { return solution_norm <= 2.0 * epsilon; }

  /// One row per iteration m: difference norm, ratio to the previous one and
  /// Gamma^d_{m,h} for every probe.
  void write_csv(const std::string& path) const {
    std::vector<std::string> header{"m", "diff_norm_E", "ratio"};
    for (const auto& p : regularity) header.push_back("gamma_d" + format_double(p.d) + "_h" + format_double(p.h));
    CsvWriter csv(path, header);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t m = 0; m < diffs.size(); ++m) {
      std::vector<double> row{double(m + 1), diffs[m], m ? ratios[m - 1] : nan};
      for (const auto& p : regularity) row.push_back(m < p.gamma.size() ? p.gamma[m] : nan);
      csv.row(row);
    }
  }
};

struct TrajectorySolution {
  TimeGrid grid;
  SpectralState data;       // spectral Cauchy data actually evolved
  Eigen::MatrixXd u_hat;    // spectral u at every node
  std::vector<double> norm_inf;  // ||u(t_k)||_{(b+1, inf)}
  std::vector<double> norm_d;    // ||u(t_k)||_{(b+1, d)}
  double d = kInf;
  int iterations = 0;
  bool converged = false;
  bool reflected = false;  // solved with (u0, -u1); node t stands for -t

  void write_csv(const std::string& path) const {
    CsvWriter csv(path, {"t", "norm_b1_inf", "norm_b1_d"});
    for (std::size_t k = 0; k < grid.size(); ++k)
      csv.row({reflected ? -grid.nodes[k] : grid.nodes[k], norm_inf[k], norm_d[k]});
  }
};

struct SolverOptions {
  int max_iter = 60;
  double tol = 1e-8;
  double d = kInf;  // secondary index of the cached (b+1, d) norms
  int threads = 1;
  std::vector<std::pair<double, double>> probes;  // (d, h) regularity probes
  int local_intervals = 120;
  double local_min_T = 1e-4;
};

/// Weighted sup of a norm trace sampled at times t with offset h.
using WeightFn = std::function<double(const std::vector<double>& t, const std::vector<double>& norms, double h)>;

/// Picard solver for u = Wdot(t) u0 + W(t) u1 + int_0^t W(t-s) F(u(s)) ds on a
/// fixed time grid. Iterates live spectrally; norms are taken physically.
class DuhamelSolver {
 public:
  DuhamelSolver(Propagator prop, ParameterSet ps, Nonlinearity nl, TimeGrid grid, SolverOptions opt = {})
      : prop_(std::move(prop)),
        ps_(ps),
        nl_(nl),
        integ_(std::move(grid), prop_.omega()),
        opt_(std::move(opt)) {
    require(std::abs(nl_.b - ps_.b) < 1e-12, ErrorCode::ConstraintViolation, "nonlinearity power differs from b");
    require(prop_.dimension() == ps_.n, ErrorCode::ConstraintViolation, "propagator dimension differs from n");
  }

  const Propagator& propagator() const { return prop_; }
  const ParameterSet& params() const { return ps_; }
  const Nonlinearity& nonlinearity() const { return nl_; }
  const TimeGrid& grid() const { return integ_.grid(); }
  const ProductIntegrator& integrator() const { return integ_; }
  const SolverOptions& options() const { return opt_; }
  const SphericalTransform& transform() const { return *prop_.transform(); }

  Eigen::MatrixXd linear(const SpectralState& data, const TimeGrid& g) const {
    return linear_trajectory(prop_, data, g.nodes);
  }

  /// Spectral F(u) at every column of a physical matrix.
  Eigen::MatrixXd forcing_from_physical(const Eigen::MatrixXd& u_phys) const {
    return transform().forward_batch(u_phys.unaryExpr([this](double x) { return nl_(x); }));
  }
  Eigen::MatrixXd forcing(const Eigen::MatrixXd& u_hat) const {
    return forcing_from_physical(transform().inverse_batch(u_hat));
  }

  /// Duhamel term of the stored trajectory at the node t.
  RadialProfile duhamel(const TrajectorySolution& traj, double t) const {
    require(traj.grid.nodes == grid().nodes, ErrorCode::IncompatibleGrid, "trajectory is on a different time grid");
    const std::size_t k = grid().index_of(t);
    const Eigen::MatrixXd T = integ_.duhamel(forcing(traj.u_hat));
    return prop_.physical(T.col(static_cast<Eigen::Index>(k)));
  }

  std::vector<double> physical_norms(const Eigen::MatrixXd& phys, double d) const {
    const LorentzExponents e(ps_.b + 1.0, d);
    std::vector<double> out(static_cast<std::size_t>(phys.cols()));
    const auto& rg = transform().radial_grid();
    parallel_for(out.size(), opt_.threads, [&](std::size_t k) {
      out[k] = lorentz_norm(RadialProfile(rg, phys.col(static_cast<Eigen::Index>(k))), e);
    });
    return out;
  }

  double e_norm(const Eigen::MatrixXd& u_hat, double d = kInf, double h = 0.0) const {
    return weighted_norm(grid().nodes, physical_norms(transform().inverse_batch(u_hat), d), ps_, h).total;
  }

  /// Global small-data solve on the solver's grid. With `reflected` the data
  /// (u0, -u1) are evolved, which is the backward problem in the variable -t.
  std::pair<TrajectorySolution, ContractionDiagnostics> solve_global(const WaveState& data, bool reflected = false) const {
    SpectralState sd = prop_.to_spectral(data);
    if (reflected) sd.ut = -sd.ut;
    const WeightFn weight = [this](const std::vector<double>& t, const std::vector<double>& norms, double h) {
      return weighted_norm(t, norms, ps_, h).total;
    };
    ContractionDiagnostics diag;
    for (const auto& [d, h] : opt_.probes) diag.regularity.push_back({d, h, {}, 0.0, 0.0, false});
    TrajectorySolution traj = picard(integ_, sd, weight, &diag);
    traj.reflected = reflected;
    return {std::move(traj), std::move(diag)};
  }

  /// Local solve with weight |t|^beta on [0, T], halving T until the Picard
  /// sequence contracts.
  TrajectorySolution solve_local(const WaveState& data, double T) const {
    const SpectralState sd = prop_.to_spectral(data);
    const double beta = ps_.beta;
    const WeightFn weight = [beta](const std::vector<double>& t, const std::vector<double>& norms, double) {
      return local_weighted(t, norms, beta);
    };
    while (T >= opt_.local_min_T) {
      const ProductIntegrator integ(TimeGrid::local(T, opt_.local_intervals, 2.0, grid().degree), prop_.omega());
      try {
        TrajectorySolution traj = picard(integ, sd, weight, nullptr);
        if (traj.converged) return traj;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Divergence) throw;
      }
      T *= 0.5;
    }
    fail(ErrorCode::TimeUnderflow, "no contraction for T >= " + format_double(opt_.local_min_T));
  }

  /// sup_{0 < t <= T} t^eta ||u(t)||, the E_eta^T norm.
  static double local_weighted(const std::vector<double>& t, const std::vector<double>& norms, double eta) {
    double s = 0.0;
    for (std::size_t k = 0; k < norms.size(); ++k)
      if (t[k] > 0.0) s = std::max(s, std::pow(t[k], eta) * norms[k]);
    return s;
  }

  /// Max over nodes of ||u - (linear flow + T(u))||_{(b+1, d)} with the
  /// Duhamel term recomputed on the bisected grid. Values at the new nodes
  /// come from the discrete equation itself (Nystroem extension).
  double residual(const TrajectorySolution& traj, double d = kInf) const {
    const TimeGrid& g = traj.grid;
    const ProductIntegrator coarse(g, prop_.omega());
    const TimeGrid fine = g.refined();
    const ProductIntegrator fine_integ(fine, prop_.omega());
    const Eigen::MatrixXd f_coarse = forcing(traj.u_hat);
    const auto cum = coarse.cumulative(f_coarse);
    const Eigen::MatrixXd lin_fine = linear(traj.data, fine);
    Eigen::MatrixXd u_fine(traj.u_hat.rows(), static_cast<Eigen::Index>(fine.size()));
    for (std::size_t k = 0; k < fine.size(); ++k) {
      const auto col = static_cast<Eigen::Index>(k);
      if (k % 2 == 0)
        u_fine.col(col) = traj.u_hat.col(col / 2);
      else
        u_fine.col(col) = lin_fine.col(col) + coarse.duhamel_at(fine.nodes[k], f_coarse, cum);
    }
    const Eigen::MatrixXd t_fine = fine_integ.duhamel(forcing(u_fine));
    Eigen::MatrixXd defect(traj.u_hat.rows(), traj.u_hat.cols());
    for (Eigen::Index k = 0; k < defect.cols(); ++k)
      defect.col(k) = traj.u_hat.col(k) - lin_fine.col(2 * k) - t_fine.col(2 * k);
    const auto norms = physical_norms(transform().inverse_batch(defect), d);
    double r = 0.0;
    for (double v : norms) r = std::max(r, v);
    return r;
  }

 private:
  TrajectorySolution picard(const ProductIntegrator& integ, const SpectralState& sd, const WeightFn& weight,
                            ContractionDiagnostics* diag) const {
    const double b = ps_.b;
    const std::vector<double>& nodes = integ.grid().nodes;
    const Eigen::MatrixXd v1 = linear(sd, integ.grid());
    const Eigen::MatrixXd v1_phys = transform().inverse_batch(v1);
    Eigen::MatrixXd v = v1, v_phys = v1_phys;

    const double eps = weight(nodes, physical_norms(v1_phys, kInf), 0.0);
    double v_norm = eps, prev_v_norm = eps;
    double prev_diff = -1.0;
    double K = 0.0;
    int over_one = 0;
    bool converged = false;
    int iter = 0;
    std::vector<double> diffs, ratios, iterate_norms{eps};
    std::vector<std::vector<double>> probe_quotients(diag ? diag->regularity.size() : 0);

    for (iter = 1; iter <= opt_.max_iter; ++iter) {
      const Eigen::MatrixXd f_hat = forcing_from_physical(v_phys);
      const Eigen::MatrixXd t_hat = integ.duhamel(f_hat);
      const Eigen::MatrixXd t_phys = transform().inverse_batch(t_hat);
      Eigen::MatrixXd next_phys = v1_phys + t_phys;
      require(next_phys.allFinite(), ErrorCode::Divergence, "Picard iterate is not finite; reduce the data size");

      if (diag) {
        for (std::size_t p = 0; p < diag->regularity.size(); ++p) {
          auto& probe = diag->regularity[p];
          probe.gamma.push_back(weight(nodes, physical_norms(v_phys, probe.d), probe.h));
          const double num = weight(nodes, physical_norms(t_phys, probe.d), probe.h);
          const double den = std::pow(v_norm, b - 1.0) * probe.gamma.back();
          if (den > 0.0) probe_quotients[p].push_back(num / den);
        }
        const double t_norm = weight(nodes, physical_norms(t_phys, kInf), 0.0);
        if (v_norm > 0.0) K = std::max(K, t_norm / std::pow(v_norm, b));
      }

      const double diff = weight(nodes, physical_norms(next_phys - v_phys, kInf), 0.0);
      diffs.push_back(diff);
      const double next_norm = weight(nodes, physical_norms(next_phys, kInf), 0.0);
      if (prev_diff > 0.0) {
        const double ratio = diff / prev_diff;
        ratios.push_back(ratio);
        const double lip = std::pow(v_norm, b - 1.0) + std::pow(prev_v_norm, b - 1.0);
        if (lip > 0.0) K = std::max(K, ratio / lip);
        over_one = ratio >= 1.0 ? over_one + 1 : 0;
        if (over_one >= 3) fail(ErrorCode::Divergence, "Picard differences grew for 3 consecutive iterations; reduce epsilon");
      }
      prev_diff = diff;
      prev_v_norm = v_norm;
      v_norm = next_norm;
      iterate_norms.push_back(next_norm);
      v = v1 + t_hat;
      v_phys = std::move(next_phys);
      if (diff < opt_.tol) {
        converged = true;
        break;
      }
    }

    TrajectorySolution traj;
    traj.grid = integ.grid();
    traj.data = sd;
    traj.u_hat = v;
    traj.norm_inf = physical_norms(v_phys, kInf);
    traj.d = opt_.d;
    traj.norm_d = std::isinf(opt_.d) ? traj.norm_inf : physical_norms(v_phys, opt_.d);
    traj.iterations = std::min(iter, opt_.max_iter);
    traj.converged = converged;

    if (diag) {
      diag->epsilon = eps;
      diag->K_measured = K;
      diag->L = K * std::pow(2.0, b) * std::pow(eps, b - 1.0);
      diag->diffs = std::move(diffs);
      diag->ratios = std::move(ratios);
      diag->iterate_norms = std::move(iterate_norms);
      diag->solution_norm = v_norm;
      for (std::size_t p = 0; p < diag->regularity.size(); ++p) {
        auto& probe = diag->regularity[p];
        probe.gamma.push_back(weight(nodes, physical_norms(v_phys, probe.d), probe.h));
        for (double q : probe_quotients[p]) probe.K = std::max(probe.K, q);
        probe.L = probe.K * std::pow(2.0 * eps, b - 1.0);
        probe.bound_holds = probe.L < 1.0;
        for (double gm : probe.gamma)
          if (probe.bound_holds && gm > probe.gamma.front() / (1.0 - probe.L)) probe.bound_holds = false;
      }
    }
    return traj;
  }

  Propagator prop_;
  ParameterSet ps_;
  Nonlinearity nl_;
  ProductIntegrator integ_;
  SolverOptions opt_;
};

}  // namespace hyperwave
