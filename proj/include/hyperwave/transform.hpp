#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hyperwave/error.hpp"
#include "hyperwave/geometry.hpp"
#include "hyperwave/quadrature.hpp"

namespace hyperwave {

/// Plancherel density |c(lambda)|^{-2} in the normalization where the n = 3
/// inversion constant is exactly one.
inline double plancherel_density(int n, double lambda) {
  if (n != 3) fail(ErrorCode::UnsupportedDimension, "Plancherel density implemented for n = 3 only");
  return lambda * lambda / (2.0 * std::numbers::pi * std::numbers::pi);
}

struct SpectralGrid {
  int n = 3;
  double lambda_max = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;  // quadrature weight times Plancherel density

  std::size_t size() const { return nodes.size(); }

  /// `density_scale` multiplies the Plancherel density; anything other than 1
  /// leaves the pair uncalibrated until calibrate() absorbs it.
  static std::shared_ptr<const SpectralGrid> gauss_legendre(int n, double lambda_max, int panels, int order = 16,
                                                          double density_scale = 1.0) {
    require(lambda_max > 0.0, ErrorCode::Domain, "lambda_max must be positive");
    const QuadratureRule rule = composite_gauss_legendre(uniform_breaks(0.0, lambda_max, panels), order);
    auto grid = std::make_shared<SpectralGrid>();
    grid->n = n;
    grid->lambda_max = lambda_max;
    grid->nodes = rule.nodes;
    grid->weights.resize(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j)
      grid->weights[j] = density_scale * rule.weights[j] * plancherel_density(n, rule.nodes[j]);
    return grid;
  }
};

using SpectralGridPtr = std::shared_ptr<const SpectralGrid>;

struct SpectralProfile {
  SpectralGridPtr grid;
  Eigen::VectorXd values;

  SpectralProfile() = default;
  SpectralProfile(SpectralGridPtr g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
    require(grid && static_cast<std::size_t>(values.size()) == grid->size(), ErrorCode::IncompatibleGrid,
            "spectral profile length does not match its grid");
  }

  template <class Fn>
  static SpectralProfile sample(SpectralGridPtr g, Fn&& fn) {
    Eigen::VectorXd v(g->size());
    for (std::size_t j = 0; j < g->size(); ++j) v[j] = fn(g->nodes[j]);
    return SpectralProfile(std::move(g), std::move(v));
  }

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

/// Dense spherical transform pair between a radial and a spectral grid.
///
/// The kernel table phi_lambda(r) is built once; forward and inverse are
/// matrix products against it, batched over columns when a whole trajectory
/// is transformed at once.
class SphericalTransform {
 public:
  SphericalTransform(RadialGridPtr radial, SpectralGridPtr spectral)
      : radial_(std::move(radial)), spectral_(std::move(spectral)) {
    require(radial_ && spectral_, ErrorCode::IncompatibleGrid, "transform needs both grids");
    require(radial_->n == spectral_->n, ErrorCode::IncompatibleGrid, "grid dimensions differ");
    const auto nr = static_cast<Eigen::Index>(radial_->size());
    const auto nl = static_cast<Eigen::Index>(spectral_->size());
    kernel_.resize(nl, nr);
    for (Eigen::Index j = 0; j < nl; ++j)
      for (Eigen::Index i = 0; i < nr; ++i)
        kernel_(j, i) = spherical_function(radial_->n, spectral_->nodes[j], radial_->nodes[i]);
    radial_weights_ = Eigen::Map<const Eigen::VectorXd>(radial_->weights.data(), nr);
    spectral_weights_ = Eigen::Map<const Eigen::VectorXd>(spectral_->weights.data(), nl);
  }

  /// Builds the pair and calibrates it against the reference Gaussian.
  static std::shared_ptr<const SphericalTransform> make(RadialGridPtr radial, SpectralGridPtr spectral) {
    auto t = std::make_shared<SphericalTransform>(std::move(radial), std::move(spectral));
    t->calibrate();
    return t;
  }

  int dimension() const { return radial_->n; }
  const RadialGridPtr& radial_grid() const { return radial_; }
  const SpectralGridPtr& spectral_grid() const { return spectral_; }
  const Eigen::MatrixXd& kernel() const { return kernel_; }
  bool calibrated() const { return constant_.has_value(); }
  double constant() const {
    require(calibrated(), ErrorCode::CalibrationRequired, "transform pair has not been calibrated");
    return *constant_;
  }

  SpectralProfile forward(const RadialProfile& f) const {
    require(f.grid == radial_, ErrorCode::IncompatibleGrid, "profile grid does not match the transform");
    return SpectralProfile(spectral_, kernel_ * f.values.cwiseProduct(radial_weights_));
  }

  /// Columns are profiles on the radial grid.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& columns) const {
    require(static_cast<std::size_t>(columns.rows()) == radial_->size(), ErrorCode::IncompatibleGrid,
            "batch rows do not match the radial grid");
    return kernel_ * (radial_weights_.asDiagonal() * columns);
  }

  RadialProfile inverse(const SpectralProfile& g) const {
    require(g.grid == spectral_, ErrorCode::IncompatibleGrid, "spectral profile grid does not match the transform");
    return RadialProfile(radial_, constant() * (kernel_.transpose() * g.values.cwiseProduct(spectral_weights_)));
  }

  Eigen::MatrixXd inverse_batch(const Eigen::MatrixXd& columns) const {
    require(static_cast<std::size_t>(columns.rows()) == spectral_->size(), ErrorCode::IncompatibleGrid,
            "batch rows do not match the spectral grid");
    return constant() * (kernel_.transpose() * (spectral_weights_.asDiagonal() * columns));
  }

  /// Least-squares inversion constant for the round trip of exp(-r^2).
  double calibrate() {
    const RadialProfile ref = RadialProfile::sample(radial_, [](double r) { return std::exp(-r * r); });
    const Eigen::VectorXd raw = kernel_.transpose() * forward(ref).values.cwiseProduct(spectral_weights_);
    const double c = ref.values.dot(raw) / raw.squaredNorm();
    const double err = (c * raw - ref.values).cwiseAbs().maxCoeff() / ref.values.cwiseAbs().maxCoeff();
    if (!(err <= 1e-3))
      fail(ErrorCode::Resolution, "round-trip error " + std::to_string(err) + " after calibration exceeds 1e-3");
    constant_ = c;
    return c;
  }

  double l2_physical(const RadialProfile& f) const {
    return std::sqrt(f.values.cwiseAbs2().dot(radial_weights_));
  }

  double l2_spectral(const SpectralProfile& g) const {
    return std::sqrt(constant() * g.values.cwiseAbs2().dot(spectral_weights_));
  }

  /// Largest |g| on the last tenth of the spectral range, relative to max |g|.
  double spectral_tail(const SpectralProfile& g) const {
    const double peak = g.values.cwiseAbs().maxCoeff();
    if (peak == 0.0) return 0.0;
    double tail = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      if (spectral_->nodes[j] >= 0.9 * spectral_->lambda_max) tail = std::max(tail, std::abs(g.values[j]));
    return tail / peak;
  }

  void require_band_limited(const SpectralProfile& g, double threshold = 1e-10) const {
    const double tail = spectral_tail(g);
    if (tail > threshold)
      fail(ErrorCode::Resolution, "spectrum has not decayed before lambda_max (tail " + std::to_string(tail) + ")");
  }

  /// Columns r, lambda, phi_lambda(r).
  void dump_kernel_csv(const std::string& path) const {
    std::FILE* out = std::fopen(path.c_str(), "w");
    if (!out) fail(ErrorCode::IO, "cannot open " + path);
    std::fprintf(out, "r,lambda,phi\n");
    for (Eigen::Index j = 0; j < kernel_.rows(); ++j)
      for (Eigen::Index i = 0; i < kernel_.cols(); ++i)
        std::fprintf(out, "%.17g,%.17g,%.17g\n", radial_->nodes[i], spectral_->nodes[j], kernel_(j, i));
    std::fclose(out);
  }

 private:
  RadialGridPtr radial_;
  SpectralGridPtr spectral_;
  Eigen::MatrixXd kernel_;
  Eigen::VectorXd radial_weights_;
  Eigen::VectorXd spectral_weights_;
  std::optional<double> constant_;
};

using TransformPtr = std::shared_ptr<const SphericalTransform>;

}  // namespace hyperwave
