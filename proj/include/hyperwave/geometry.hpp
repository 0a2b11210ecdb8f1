#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "hyperwave/error.hpp"
#include "hyperwave/quadrature.hpp"

namespace hyperwave {

/// Below this argument the removable singularities of the spherical function
/// are evaluated by series.
inline constexpr double kSeriesThreshold = 1e-6;

struct HyperbolicSpace {
  int n = 3;

  explicit HyperbolicSpace(int dimension) : n(dimension) {
    require(n >= 2, ErrorCode::InvalidDimension, "dimension must be >= 2, got " + std::to_string(n));
  }

  /// Bottom of the spectrum of -Delta is rho^2.
  double rho() const { return 0.5 * (n - 1); }
};

/// Area of the unit sphere S^{n-1}.
inline double surface_measure(int n) {
  require(n >= 2, ErrorCode::InvalidDimension, "dimension must be >= 2, got " + std::to_string(n));
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// Volume density Omega_{n-1} sinh^{n-1}(r) of the geodesic polar measure.
inline double volume_density(int n, double r) {
  return surface_measure(n) * std::pow(std::sinh(r), n - 1);
}

inline double ball_volume(int n, double radius) {
  require(radius >= 0.0, ErrorCode::Domain, "ball radius must be >= 0");
  const double omega = surface_measure(n);
  if (n == 2) {
    // 2 pi (cosh R - 1) = 4 pi sinh^2(R/2), no cancellation
    const double s = std::sinh(0.5 * radius);
    return 2.0 * omega * s * s;
  }
  if (n == 3) {
    const double x = 2.0 * radius;
    if (x < 1e-3) {
      const double x2 = x * x;
      return std::numbers::pi * x * x2 / 6.0 * (1.0 + x2 / 20.0 + x2 * x2 / 840.0);
    }
    return std::numbers::pi * (std::sinh(x) - x);
  }
  if (radius == 0.0) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil(radius / 0.25)));
  const QuadratureRule rule = composite_gauss_legendre(uniform_breaks(0.0, radius, panels), 24);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * std::pow(std::sinh(rule.nodes[i]), n - 1);
  return omega * sum;
}

namespace detail {

inline double sinc(double x) {
  if (std::abs(x) < kSeriesThreshold) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

inline double sinhc(double x) {
  if (std::abs(x) < kSeriesThreshold) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

}  // namespace detail

/// Radial eigenfunction of -Delta with eigenvalue lambda^2 + rho^2 and
/// phi(0) = 1. Only n = 3 has a closed form implemented.
inline double spherical_function(int n, double lambda, double r) {
  require(r >= 0.0 && lambda >= 0.0, ErrorCode::Domain, "spherical_function needs r >= 0 and lambda >= 0");
  if (n != 3) fail(ErrorCode::UnsupportedDimension, "spherical functions implemented for n = 3 only, got n = " + std::to_string(n));
  // sin(lambda r) / (lambda sinh r) = sinc(lambda r) / sinhc(r)
  return detail::sinc(lambda * r) / detail::sinhc(r);
}

enum class GridKind { GaussLegendre, Uniform };

/// Nodes in geodesic distance with weights for the measure
/// Omega_{n-1} sinh^{n-1}(r) dr.
struct RadialGrid {
  int n = 3;
  double r_max = 0.0;
  GridKind kind = GridKind::GaussLegendre;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  /// Composite Gauss-Legendre panels; extra breaks (e.g. an indicator radius)
  /// are inserted so that no panel straddles them.
  static std::shared_ptr<const RadialGrid> gauss_legendre(int n, double r_max, int panels, int order = 16,
                                                        std::vector<double> extra_breaks = {}) {
    HyperbolicSpace space(n);
    require(r_max > 0.0, ErrorCode::Domain, "r_max must be positive");
    std::vector<double> breaks = uniform_breaks(0.0, r_max, panels);
    for (double b : extra_breaks) {
      if (b <= 0.0 || b >= r_max) continue;
      bool present = false;
      for (double x : breaks) present = present || std::abs(x - b) < 1e-12;
      if (!present) breaks.push_back(b);
    }
    std::sort(breaks.begin(), breaks.end());
    const QuadratureRule rule = composite_gauss_legendre(breaks, order);
    auto grid = std::make_shared<RadialGrid>();
    grid->n = space.n;
    grid->r_max = r_max;
    grid->kind = GridKind::GaussLegendre;
    grid->nodes = rule.nodes;
    grid->weights.resize(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) grid->weights[i] = rule.weights[i] * volume_density(n, rule.nodes[i]);
    return grid;
  }

  /// Uniform nodes r_i = i h on [0, r_max] with trapezoid weights. The
  /// integrands met here are even in r, so the trapezoid rule is spectrally
  /// accurate when they decay before r_max.
  static std::shared_ptr<const RadialGrid> uniform(int n, double r_max, int num_points) {
    HyperbolicSpace space(n);
    require(r_max > 0.0, ErrorCode::Domain, "r_max must be positive");
    require(num_points >= 2, ErrorCode::Discretization, "uniform grid needs >= 2 nodes");
    auto grid = std::make_shared<RadialGrid>();
    grid->n = space.n;
    grid->r_max = r_max;
    grid->kind = GridKind::Uniform;
    const double h = r_max / (num_points - 1);
    grid->nodes.resize(num_points);
    grid->weights.resize(num_points);
    for (int i = 0; i < num_points; ++i) {
      const double r = i * h;
      grid->nodes[i] = r;
      const double w = (i == 0 || i == num_points - 1) ? 0.5 * h : h;
      grid->weights[i] = w * volume_density(n, r);
    }
    return grid;
  }

  double total_volume() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

using RadialGridPtr = std::shared_ptr<const RadialGrid>;

struct RadialProfile {
  RadialGridPtr grid;
  Eigen::VectorXd values;

  RadialProfile() = default;
  RadialProfile(RadialGridPtr g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
    require(grid && static_cast<std::size_t>(values.size()) == grid->size(), ErrorCode::IncompatibleGrid,
            "profile length does not match its grid");
  }

  template <class Fn>
  static RadialProfile sample(RadialGridPtr g, Fn&& fn) {
    Eigen::VectorXd v(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) v[i] = fn(g->nodes[i]);
    return RadialProfile(std::move(g), std::move(v));
  }

  static RadialProfile zero(RadialGridPtr g) {
    const auto n = static_cast<Eigen::Index>(g->size());
    return RadialProfile(std::move(g), Eigen::VectorXd::Zero(n));
  }

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  bool finite() const { return values.allFinite(); }
  double sup_norm() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
};

inline void require_same_grid(const RadialProfile& a, const RadialProfile& b) {
  require(a.grid == b.grid, ErrorCode::IncompatibleGrid, "profiles live on different radial grids");
}

/// Second-order finite differences for d^2/dr^2 + (n-1) coth r d/dr on a
/// uniform grid. The origin uses the even-extension limit n f''(0); the last
/// node is not evaluated and set to zero.
inline RadialProfile apply_radial_laplacian(const RadialProfile& f, int n) {
  const RadialGrid& g = *f.grid;
  require(g.size() >= 5, ErrorCode::Discretization, "radial Laplacian needs at least 5 nodes");
  require(g.kind == GridKind::Uniform, ErrorCode::Discretization, "radial Laplacian needs a uniform grid");
  const std::size_t m = g.size();
  const double h = g.nodes[1] - g.nodes[0];
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  const auto& v = f.values;
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double r = g.nodes[i];
    const double d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
    const double d1 = (v[i + 1] - v[i - 1]) / (2.0 * h);
    out[i] = d2 + (n - 1) / std::tanh(r) * d1;
  }
  if (g.nodes[0] == 0.0) out[0] = n * 2.0 * (v[1] - v[0]) / (h * h);
  return RadialProfile(f.grid, std::move(out));
}

}  // namespace hyperwave
