#pragma once

#include <cmath>
#include <memory>

#include "hyperwave/hyperwave.hpp"

namespace fixtures {

using namespace hyperwave;

/// Radial and spectral grids small enough for fast unit tests.
struct SmallGrids {
  RadialGridPtr radial = RadialGrid::gauss_legendre(3, 12.0, 24);
  SpectralGridPtr spectral = SpectralGrid::gauss_legendre(3, 12.0, 16);
  TransformPtr transform = SphericalTransform::make(radial, spectral);

  RadialProfile gaussian(double a = 1.0, double w = 1.0) const {
    return RadialProfile::sample(radial, [a, w](double r) { return a * std::exp(-(r / w) * (r / w)); });
  }
};

inline const SmallGrids& small() {
  static const SmallGrids g;
  return g;
}

inline ExperimentConfig fast_config() {
  ExperimentConfig cfg;
  cfg.r_max = 12;
  cfg.r_panels = 24;
  cfg.lambda_max = 12;
  cfg.lambda_panels = 16;
  cfg.t_max = 6;
  cfg.core_intervals = 32;
  cfg.tail_intervals = 160;
  cfg.local_intervals = 40;
  return cfg;
}

}  // namespace fixtures
