#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "hyperwave/error.hpp"

namespace hyperwave {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule on [-1, 1], nodes ascending. Newton iteration on the
/// three-term recurrence, started from the Tricomi asymptotic guess.
inline QuadratureRule gauss_legendre(int order) {
  require(order >= 1, ErrorCode::Discretization, "Gauss-Legendre order must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0, p1 = x;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[order - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

/// Composite Gauss-Legendre on the panels delimited by `breaks` (ascending).
inline QuadratureRule composite_gauss_legendre(const std::vector<double>& breaks, int order) {
  require(breaks.size() >= 2, ErrorCode::Discretization, "composite rule needs at least one panel");
  const QuadratureRule base = gauss_legendre(order);
  QuadratureRule rule;
  rule.nodes.reserve((breaks.size() - 1) * order);
  rule.weights.reserve((breaks.size() - 1) * order);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    require(b > a, ErrorCode::Discretization, "panel breaks must be strictly increasing");
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int k = 0; k < order; ++k) {
      rule.nodes.push_back(mid + half * base.nodes[k]);
      rule.weights.push_back(half * base.weights[k]);
    }
  }
  return rule;
}

/// Uniform panel breaks on [a, b].
inline std::vector<double> uniform_breaks(double a, double b, int panels) {
  require(panels >= 1, ErrorCode::Discretization, "need at least one panel");
  std::vector<double> breaks(panels + 1);
  for (int i = 0; i <= panels; ++i) breaks[i] = a + (b - a) * i / panels;
  breaks.back() = b;
  return breaks;
}

}  // namespace hyperwave
