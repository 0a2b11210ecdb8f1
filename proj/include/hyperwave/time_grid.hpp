#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <vector>

#include "hyperwave/error.hpp"
#include "hyperwave/propagator.hpp"
#include "hyperwave/quadrature.hpp"

namespace hyperwave {

/// Nodes 0 = t_0 < ... < t_N grouped into consecutive panels of `degree`
/// intervals. The Duhamel rule interpolates on each panel with a polynomial
/// of that degree.
struct TimeGrid {
  std::vector<double> nodes;
  int degree = 3;
  int refinement = 0;

  std::size_t size() const { return nodes.size(); }
  std::size_t intervals() const { return nodes.size() - 1; }
  double t_max() const { return nodes.back(); }

  /// Graded nodes t0 (k/K)^grading on [0, t0], then uniform panels on
  /// [t0, t_max]. Interval counts are rounded up to multiples of `degree`.
  static TimeGrid graded(double t0, double t_max, int core_intervals, int tail_intervals, double grading = 2.0,
                         int degree = 3) {
    require(t_max > 0.0 && t0 > 0.0, ErrorCode::Domain, "time grid needs positive t0 and t_max");
    require(degree >= 1 && degree <= 6, ErrorCode::Discretization, "panel degree must be in [1, 6]");
    require(grading >= 1.0, ErrorCode::Discretization, "grading exponent must be >= 1");
    auto round_up = [degree](int k) { return std::max(degree, (k + degree - 1) / degree * degree); };
    TimeGrid g;
    g.degree = degree;
    const double core_end = std::min(t0, t_max);
    const int kc = round_up(core_intervals);
    for (int k = 0; k <= kc; ++k) g.nodes.push_back(core_end * std::pow(static_cast<double>(k) / kc, grading));
    if (t_max > t0) {
      const int kt = round_up(tail_intervals);
      for (int k = 1; k <= kt; ++k) g.nodes.push_back(t0 + (t_max - t0) * k / kt);
    }
    g.nodes.back() = t_max;
    return g;
  }

  /// Graded grid on [0, T] with no tail.
  static TimeGrid local(double T, int intervals, double grading = 2.0, int degree = 3) {
    return graded(T, T, intervals, 0, grading, degree);
  }

  /// Every interval bisected; previous node k becomes node 2k.
  TimeGrid refined() const {
    TimeGrid g;
    g.degree = degree;
    g.refinement = refinement + 1;
    g.nodes.reserve(2 * nodes.size() - 1);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      g.nodes.push_back(nodes[k]);
      g.nodes.push_back(0.5 * (nodes[k] + nodes[k + 1]));
    }
    g.nodes.push_back(nodes.back());
    return g;
  }

  /// Index of an existing node; no interpolation is ever done silently.
  std::size_t index_of(double t) const {
    const double tol = 1e-12 * std::max(1.0, std::abs(t));
    for (std::size_t k = 0; k < nodes.size(); ++k)
      if (std::abs(nodes[k] - t) <= tol) return k;
    fail(ErrorCode::InterpolationRequired, "t = " + std::to_string(t) + " is not a node of the time grid");
  }

  std::size_t first_at_or_after(double t) const {
    for (std::size_t k = 0; k < nodes.size(); ++k)
      if (nodes[k] >= t - 1e-12) return k;
    return nodes.size();
  }
};

/// Product integration of s -> K(omega, s) F(s) with F replaced by its
/// panelwise Lagrange interpolant and K in {cos(omega s), sin(omega s)/omega}.
/// Kernel moments are computed with a 12-point Gauss-Legendre rule, exact to
/// rounding while omega times the panel width stays O(1).
///
/// C(t) = int_0^t cos(omega s) F ds and S(t) = int_0^t sin(omega s)/omega F ds
/// give the Duhamel term as sin(omega t)/omega C(t) - cos(omega t) S(t).
class ProductIntegrator {
 public:
  ProductIntegrator(TimeGrid grid, Eigen::VectorXd omega) : grid_(std::move(grid)), omega_(std::move(omega)) {
    require(grid_.intervals() % static_cast<std::size_t>(grid_.degree) == 0, ErrorCode::Discretization,
            "time grid intervals must fill whole panels");
    gl_ = gauss_legendre(12);
    const std::size_t nt = grid_.size();
    cos_w_.resize(nt);
    sin_w_.resize(nt);
    for (std::size_t k = 1; k < nt; ++k) moments(k, grid_.nodes[k], cos_w_[k], sin_w_[k]);
  }

  const TimeGrid& grid() const { return grid_; }
  const Eigen::VectorXd& omega() const { return omega_; }

  struct Cumulative {
    Eigen::MatrixXd cos_part;  // C at each node, one column per node
    Eigen::MatrixXd sin_part;  // S at each node
  };

  /// `f_hat` holds F at every node in its columns.
  Cumulative cumulative(const Eigen::MatrixXd& f_hat) const {
    check(f_hat);
    const std::size_t nt = grid_.size();
    const auto nl = omega_.size();
    Cumulative out{Eigen::MatrixXd::Zero(nl, static_cast<Eigen::Index>(nt)),
                   Eigen::MatrixXd::Zero(nl, static_cast<Eigen::Index>(nt))};
    Eigen::VectorXd base_c = Eigen::VectorXd::Zero(nl), base_s = Eigen::VectorXd::Zero(nl);
    const auto deg = static_cast<std::size_t>(grid_.degree);
    for (std::size_t k = 1; k < nt; ++k) {
      const std::size_t start = panel_start(k);
      Eigen::VectorXd c = base_c, s = base_s;
      for (std::size_t i = 0; i <= deg; ++i) {
        const auto col = static_cast<Eigen::Index>(start + i);
        c += cos_w_[k].col(static_cast<Eigen::Index>(i)).cwiseProduct(f_hat.col(col));
        s += sin_w_[k].col(static_cast<Eigen::Index>(i)).cwiseProduct(f_hat.col(col));
      }
      out.cos_part.col(static_cast<Eigen::Index>(k)) = c;
      out.sin_part.col(static_cast<Eigen::Index>(k)) = s;
      if (k == start + deg) {
        base_c = c;
        base_s = s;
      }
    }
    return out;
  }

  /// Duhamel term int_0^{t_k} sin((t_k - s) omega)/omega F(s) ds at every node.
  Eigen::MatrixXd duhamel(const Eigen::MatrixXd& f_hat) const {
    const Cumulative cum = cumulative(f_hat);
    Eigen::MatrixXd out(cum.cos_part.rows(), cum.cos_part.cols());
    for (Eigen::Index k = 0; k < out.cols(); ++k) combine(grid_.nodes[static_cast<std::size_t>(k)], cum.cos_part.col(k), cum.sin_part.col(k), out.col(k));
    return out;
  }

  /// Duhamel term at an arbitrary t in [0, t_max] using the same interpolant
  /// (Nystroem extension of the discrete equation).
  Eigen::VectorXd duhamel_at(double t, const Eigen::MatrixXd& f_hat) const {
    return duhamel_at(t, f_hat, cumulative(f_hat));
  }

  /// As above, reusing cumulative sums of the same forcing.
  Eigen::VectorXd duhamel_at(double t, const Eigen::MatrixXd& f_hat, const Cumulative& cum) const {
    check(f_hat);
    require(t >= 0.0 && t <= grid_.t_max() * (1 + 1e-14), ErrorCode::Domain, "t outside the time grid");
    const auto nl = omega_.size();
    Eigen::VectorXd c = Eigen::VectorXd::Zero(nl), s = Eigen::VectorXd::Zero(nl);
    if (t > 0.0) {
      std::size_t k = grid_.first_at_or_after(t);
      k = std::max<std::size_t>(k, 1);
      const std::size_t start = panel_start(k);
      c = cum.cos_part.col(static_cast<Eigen::Index>(start));
      s = cum.sin_part.col(static_cast<Eigen::Index>(start));
      Eigen::MatrixXd wc, ws;
      moments_from(start, t, wc, ws);
      for (int i = 0; i <= grid_.degree; ++i) {
        const auto col = static_cast<Eigen::Index>(start + static_cast<std::size_t>(i));
        c += wc.col(i).cwiseProduct(f_hat.col(col));
        s += ws.col(i).cwiseProduct(f_hat.col(col));
      }
    }
    Eigen::VectorXd out(nl);
    combine(t, c, s, out);
    return out;
  }

  std::size_t panel_start(std::size_t k) const {
    const auto deg = static_cast<std::size_t>(grid_.degree);
    return (k - 1) / deg * deg;
  }

 private:
  template <class Out>
  void combine(double t, const Eigen::VectorXd& c, const Eigen::VectorXd& s, Out&& out) const {
    for (Eigen::Index j = 0; j < omega_.size(); ++j) {
      const double w = omega_[j];
      out[j] = detail::sin_over(w, t) * c[j] - std::cos(w * t) * s[j];
    }
  }

  void check(const Eigen::MatrixXd& f_hat) const {
    require(static_cast<std::size_t>(f_hat.cols()) == grid_.size() && f_hat.rows() == omega_.size(),
            ErrorCode::IncompatibleGrid, "forcing does not match the time/spectral grids");
  }

  void moments(std::size_t k, double t, Eigen::MatrixXd& wc, Eigen::MatrixXd& ws) const {
    moments_from(panel_start(k), t, wc, ws);
  }

  /// wc(j, i) = int_{t_start}^{t} cos(omega_j s) l_i(s) ds, ws likewise with
  /// sin(omega_j s)/omega_j, l_i the Lagrange basis of the panel at `start`.
  void moments_from(std::size_t start, double t, Eigen::MatrixXd& wc, Eigen::MatrixXd& ws) const {
    const int deg = grid_.degree;
    const auto nl = omega_.size();
    wc = Eigen::MatrixXd::Zero(nl, deg + 1);
    ws = Eigen::MatrixXd::Zero(nl, deg + 1);
    const double a = grid_.nodes[start];
    if (t <= a) return;
    const double half = 0.5 * (t - a), mid = 0.5 * (t + a);
    std::vector<double> basis(static_cast<std::size_t>(deg + 1));
    for (std::size_t q = 0; q < gl_.size(); ++q) {
      const double s = mid + half * gl_.nodes[q];
      const double wq = half * gl_.weights[q];
      for (int i = 0; i <= deg; ++i) {
        double l = 1.0;
        const double ti = grid_.nodes[start + static_cast<std::size_t>(i)];
        for (int m = 0; m <= deg; ++m)
          if (m != i) l *= (s - grid_.nodes[start + static_cast<std::size_t>(m)]) / (ti - grid_.nodes[start + static_cast<std::size_t>(m)]);
        basis[static_cast<std::size_t>(i)] = wq * l;
      }
      for (Eigen::Index j = 0; j < nl; ++j) {
        const double cw = std::cos(omega_[j] * s), sw = detail::sin_over(omega_[j], s);
        for (int i = 0; i <= deg; ++i) {
          wc(j, i) += cw * basis[static_cast<std::size_t>(i)];
          ws(j, i) += sw * basis[static_cast<std::size_t>(i)];
        }
      }
    }
  }

  TimeGrid grid_;
  Eigen::VectorXd omega_;
  QuadratureRule gl_;
  std::vector<Eigen::MatrixXd> cos_w_;
  std::vector<Eigen::MatrixXd> sin_w_;
};

}  // namespace hyperwave
