#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "hyperwave/config.hpp"
#include "hyperwave/scattering.hpp"

namespace hyperwave {

/// Grids, transform, parameters and solver assembled from one configuration.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    ps_ = derive(cfg_.n, cfg_.b, cfg_.sigma, cfg_.h, cfg_.d, cfg_.t0);
    radial_ = RadialGrid::gauss_legendre(cfg_.n, cfg_.r_max, cfg_.r_panels, cfg_.r_order);
    spectral_ = SpectralGrid::gauss_legendre(cfg_.n, cfg_.lambda_max, cfg_.lambda_panels, cfg_.lambda_order);
    transform_ = SphericalTransform::make(radial_, spectral_);
    prop_.emplace(transform_, MassParameter(cfg_.c, cfg_.n));
    SolverOptions opt;
    opt.max_iter = cfg_.max_iter;
    opt.tol = cfg_.tol;
    opt.d = cfg_.d;
    opt.threads = cfg_.threads;
    opt.local_intervals = cfg_.local_intervals;
    const double h_mid = 0.5 * (1.0 - ps_.b * ps_.alpha);
    for (double d : {2.0, ps_.b + 1.0, kInf})
      for (double h : {0.0, h_mid}) opt.probes.emplace_back(d, h);
    solver_.emplace(*prop_, ps_, Nonlinearity(cfg_.b, cfg_.mu, cfg_.sign),
                    TimeGrid::graded(cfg_.t0, cfg_.t_max, cfg_.core_intervals, cfg_.tail_intervals, cfg_.grading,
                                     cfg_.time_degree),
                    opt);
  }

  const ExperimentConfig& config() const { return cfg_; }
  const ParameterSet& params() const { return ps_; }
  const RadialGridPtr& radial() const { return radial_; }
  const TransformPtr& transform() const { return transform_; }
  const Propagator& propagator() const { return *prop_; }
  const DuhamelSolver& solver() const { return *solver_; }

  /// Amplitude-a member of the data family: u1 = a exp(-(r/w)^2), u0 = u0_amplitude u1.
  WaveState bump_data(double a) const {
    const double w = cfg_.data_width;
    auto bump = RadialProfile::sample(radial_, [a, w](double r) { return a * std::exp(-(r / w) * (r / w)); });
    RadialProfile u0(radial_, cfg_.u0_amplitude * bump.values);
    return {u0, bump};
  }

  /// Difference bump added to data_b in the stability experiment.
  WaveState perturbed(const WaveState& data, double a) const {
    const double w = cfg_.diff_width, s = cfg_.diff_amplitude * a;
    const auto bump = RadialProfile::sample(radial_, [s, w](double r) { return s * std::exp(-(r / w) * (r / w)); });
    return {data.u, RadialProfile(radial_, data.ut.values + bump.values)};
  }

  /// Data norm (b+1, inf) of the linear flow on the solver's time grid.
  double data_norm_of(const WaveState& data) const {
    return data_norm(*prop_, data, ps_, kInf, solver_->grid().nodes, 0.0, cfg_.threads);
  }

  /// Checks that the radial and spectral truncations are invisible to the data.
  void require_resolved(const WaveState& data) const {
    for (const auto* f : {&data.u, &data.ut})
      if (f->sup_norm() > 0.0) transform_->require_band_limited(transform_->forward(*f));
  }

  /// Family member with data norm exactly eps.
  WaveState data_with_norm(double eps) const {
    const double unit = data_norm_of(bump_data(1.0));
    require(unit > 0.0, ErrorCode::Precondition, "data family has zero norm");
    return bump_data(eps / unit);
  }

  struct Run {
    double epsilon = 0.0;
    WaveState data;
    TrajectorySolution traj;
    ContractionDiagnostics diag;
  };

  /// Global solve at the configured epsilon, or at the largest 2^-k whose
  /// measured contraction constant is below 0.5.
  Run global_run() const {
    if (cfg_.epsilon > 0.0) return solve_at(cfg_.epsilon);
    for (int k = 0; k <= 30; ++k) {
      const double eps = std::ldexp(1.0, -k);
      try {
        Run run = solve_at(eps);
        if (run.traj.converged && run.diag.L < 0.5) return run;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Divergence) throw;
      }
    }
    fail(ErrorCode::Divergence, "no epsilon = 2^-k with k <= 30 gives L < 0.5");
  }

  Run solve_at(double eps) const {
    Run run;
    run.epsilon = eps;
    run.data = data_with_norm(eps);
    require_resolved(run.data);
    auto [traj, diag] = solver_->solve_global(run.data);
    run.traj = std::move(traj);
    run.diag = std::move(diag);
    return run;
  }

 private:
  ExperimentConfig cfg_;
  ParameterSet ps_;
  RadialGridPtr radial_;
  SpectralGridPtr spectral_;
  TransformPtr transform_;
  std::optional<Propagator> prop_;
  std::optional<DuhamelSolver> solver_;
};

}  // namespace hyperwave
