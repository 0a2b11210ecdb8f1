#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>

#include "hyperwave/error.hpp"
#include "hyperwave/geometry.hpp"
#include "hyperwave/transform.hpp"

namespace hyperwave {

/// Klein-Gordon mass c, fixed for the lifetime of an experiment.
class MassParameter {
 public:
  MassParameter(double c, int n) : c_(c) {
    const double rho = HyperbolicSpace(n).rho();
    require(c >= -rho * rho - 1e-14, ErrorCode::SpectralPositivity,
            "mass c = " + std::to_string(c) + " is below -rho^2 = " + std::to_string(-rho * rho));
    shifted_ = std::abs(c + rho * rho) <= 1e-14;
  }

  static MassParameter shifted(int n) {
    const double rho = HyperbolicSpace(n).rho();
    return MassParameter(-rho * rho, n);
  }

  double value() const { return c_; }
  bool is_shifted() const { return shifted_; }

 private:
  double c_;
  bool shifted_ = false;
};

/// omega(lambda) = sqrt(lambda^2 + rho^2 + c), the symbol of D.
inline double dispersion_relation(double lambda, double c, int n) {
  const double rho = HyperbolicSpace(n).rho();
  require(c >= -rho * rho - 1e-14, ErrorCode::SpectralPositivity, "mass below -rho^2");
  return std::sqrt(std::max(0.0, lambda * lambda + rho * rho + c));
}

/// Cauchy data (u, u_t) on the physical side.
struct WaveState {
  RadialProfile u;
  RadialProfile ut;
};

/// Spectral coefficients of (u, u_t).
struct SpectralState {
  Eigen::VectorXd u;
  Eigen::VectorXd ut;
};

namespace detail {

/// sin(t w) / w, with the w -> 0 limit t.
inline double sin_over(double omega, double t) { return t * sinc(omega * t); }

}  // namespace detail

/// Spectral multipliers of the wave group W(t) = sin(tD)/D, Wdot(t) = cos(tD).
class Propagator {
 public:
  /// Spectral mass near lambda = 0 below this band makes cos(tD)/D singular in
  /// the shifted case.
  static constexpr double kSingularBand = 0.05;

  Propagator(TransformPtr transform, MassParameter mass) : transform_(std::move(transform)), mass_(mass) {
    require(transform_ && transform_->calibrated(), ErrorCode::CalibrationRequired, "propagator needs a calibrated transform");
    const auto& nodes = transform_->spectral_grid()->nodes;
    omega_.resize(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t j = 0; j < nodes.size(); ++j)
      omega_[static_cast<Eigen::Index>(j)] = dispersion_relation(nodes[j], mass_.value(), transform_->dimension());
  }

  const TransformPtr& transform() const { return transform_; }
  const MassParameter& mass() const { return mass_; }
  const Eigen::VectorXd& omega() const { return omega_; }
  int dimension() const { return transform_->dimension(); }

  Eigen::VectorXd multiplier_W(double t) const {
    return omega_.unaryExpr([t](double w) { return detail::sin_over(w, t); });
  }
  Eigen::VectorXd multiplier_Wdot(double t) const {
    return omega_.unaryExpr([t](double w) { return std::cos(t * w); });
  }

  Eigen::VectorXd W(double t, const Eigen::VectorXd& g) const { return multiplier_W(t).cwiseProduct(g); }
  Eigen::VectorXd Wdot(double t, const Eigen::VectorXd& g) const { return multiplier_Wdot(t).cwiseProduct(g); }
  Eigen::VectorXd D(const Eigen::VectorXd& g) const { return omega_.cwiseProduct(g); }

  Eigen::VectorXd Wdot_over_D(double t, const Eigen::VectorXd& g) const {
    require_regular_at_zero(g);
    Eigen::VectorXd out(g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j) out[j] = g[j] == 0.0 ? 0.0 : std::cos(t * omega_[j]) / omega_[j] * g[j];
    return out;
  }

  /// Raises singular-multiplier when 1/D would act on spectral mass at omega = 0.
  void require_regular_at_zero(const Eigen::VectorXd& g) const {
    const double peak = g.cwiseAbs().maxCoeff();
    if (peak == 0.0) return;
    const auto& nodes = transform_->spectral_grid()->nodes;
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      const bool near_zero = omega_[j] < 1e-8 || (mass_.is_shifted() && nodes[static_cast<std::size_t>(j)] < kSingularBand);
      if (near_zero && std::abs(g[j]) > 1e-10 * peak)
        fail(ErrorCode::SingularMultiplier, "cos(tD)/D applied to data with spectral mass at omega = 0");
    }
  }

  RadialProfile apply_W(double t, const RadialProfile& g) const { return physical(W(t, spectral(g))); }
  RadialProfile apply_Wdot(double t, const RadialProfile& g) const { return physical(Wdot(t, spectral(g))); }
  RadialProfile apply_Wdot_over_D(double t, const RadialProfile& g) const {
    return physical(Wdot_over_D(t, spectral(g)));
  }

  /// Free evolution of spectral data: (Wdot u0 + W u1, d/dt of the same).
  SpectralState linear_flow(double t, const SpectralState& data) const {
    SpectralState out;
    out.u.resize(omega_.size());
    out.ut.resize(omega_.size());
    for (Eigen::Index j = 0; j < omega_.size(); ++j) {
      const double w = omega_[j], c = std::cos(t * w), s = std::sin(t * w);
      out.u[j] = c * data.u[j] + detail::sin_over(w, t) * data.ut[j];
      out.ut[j] = -w * s * data.u[j] + c * data.ut[j];
    }
    return out;
  }

  WaveState linear_flow(double t, const WaveState& data) const {
    require_same_grid(data.u, data.ut);
    const SpectralState s = linear_flow(t, to_spectral(data));
    return {physical(s.u), physical(s.ut)};
  }

  /// ||omega u||^2 + ||u_t||^2 in the Plancherel-weighted spectral L^2.
  double energy(const SpectralState& s) const {
    const Eigen::VectorXd& w = Eigen::Map<const Eigen::VectorXd>(transform_->spectral_grid()->weights.data(), omega_.size());
    return transform_->constant() * (omega_.cwiseProduct(s.u).cwiseAbs2().dot(w) + s.ut.cwiseAbs2().dot(w));
  }

  SpectralState to_spectral(const WaveState& data) const { return {spectral(data.u), spectral(data.ut)}; }
  WaveState to_physical(const SpectralState& s) const { return {physical(s.u), physical(s.ut)}; }

  Eigen::VectorXd spectral(const RadialProfile& f) const { return transform_->forward(f).values; }
  RadialProfile physical(const Eigen::VectorXd& g) const {
    return transform_->inverse(SpectralProfile(transform_->spectral_grid(), g));
  }

 private:
  TransformPtr transform_;
  MassParameter mass_;
  Eigen::VectorXd omega_;
};

}  // namespace hyperwave
