#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "hyperwave/error.hpp"
#include "hyperwave/geometry.hpp"

namespace hyperwave {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Exponents (p, q) of L^{(p,q)}; infinity is represented by kInf.
struct LorentzExponents {
  double p = 2.0;
  double q = 2.0;

  LorentzExponents() = default;
  LorentzExponents(double p_, double q_) : p(p_), q(q_) {
    require(p > 1.0, ErrorCode::Precondition, "Lorentz exponent p must exceed 1, got " + std::to_string(p));
    require(q >= 1.0, ErrorCode::Precondition, "Lorentz exponent q must be >= 1, got " + std::to_string(q));
    require(!(std::isinf(p) && !std::isinf(q)), ErrorCode::Precondition, "p = inf requires q = inf");
  }

  static LorentzExponents weak(double p) { return {p, kInf}; }
  static LorentzExponents lebesgue(double p) { return {p, p}; }
};

/// Decreasing rearrangement of the step function that gives each node the
/// measure of its quadrature weight. levels[k] is the measure of the k+1
/// largest cells, f* equals values[k] on [levels[k-1], levels[k]).
struct RearrangementTable {
  std::vector<double> levels;
  std::vector<double> values;

  std::size_t size() const { return levels.size(); }
  double total_measure() const { return levels.empty() ? 0.0 : levels.back(); }

  double value_at(double s) const {
    const auto it = std::upper_bound(levels.begin(), levels.end(), s);
    if (it == levels.end()) return 0.0;
    return values[static_cast<std::size_t>(it - levels.begin())];
  }

  /// mu{f* > h}; equals the source distribution function by construction.
  double distribution(double height) const {
    double m = 0.0;
    for (std::size_t k = 0; k < values.size() && values[k] > height; ++k) m = levels[k];
    return m;
  }

  /// f* on a logarithmic s-grid over [1e-6 V, V].
  std::vector<std::pair<double, double>> sample_log(int count) const {
    std::vector<std::pair<double, double>> out;
    const double v = total_measure();
    if (v <= 0.0 || count < 2) return out;
    const double lo = 1e-6 * v;
    for (int i = 0; i < count; ++i) {
      const double s = lo * std::pow(v / lo, static_cast<double>(i) / (count - 1));
      out.emplace_back(s, value_at(std::min(s, std::nextafter(v, 0.0))));
    }
    return out;
  }
};

inline double distribution_function(const RadialProfile& f, double height) {
  const auto& w = f.grid->weights;
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f.values[static_cast<Eigen::Index>(i)]) > height) m += w[i];
  return m;
}

inline RearrangementTable decreasing_rearrangement(const RadialProfile& f) {
  const auto& w = f.grid->weights;
  std::vector<std::size_t> order;
  order.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    if (w[i] > 0.0 && f.values[static_cast<Eigen::Index>(i)] != 0.0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(f.values[static_cast<Eigen::Index>(a)]) > std::abs(f.values[static_cast<Eigen::Index>(b)]);
  });
  RearrangementTable table;
  table.levels.reserve(order.size());
  table.values.reserve(order.size());
  double cumulative = 0.0;
  for (std::size_t i : order) {
    cumulative += w[i];
    table.levels.push_back(cumulative);
    table.values.push_back(std::abs(f.values[static_cast<Eigen::Index>(i)]));
  }
  return table;
}

inline double lorentz_norm(const RearrangementTable& t, const LorentzExponents& e) {
  if (t.size() == 0) return 0.0;
  if (std::isinf(e.p)) return t.values.front();
  if (std::isinf(e.q)) {
    double sup = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) sup = std::max(sup, std::pow(t.levels[k], 1.0 / e.p) * t.values[k]);
    return sup;
  }
  // int_{S_{k-1}}^{S_k} s^{q/p - 1} ds = (p/q) (S_k^{q/p} - S_{k-1}^{q/p}), evaluated without cancellation
  const double a = e.q / e.p;
  double sum = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double s = t.levels[k];
    const double inc = prev == 0.0 ? std::pow(s, a) : -std::pow(s, a) * std::expm1(a * std::log1p(-(s - prev) / s));
    sum += std::pow(t.values[k], e.q) * inc / a;
    prev = s;
  }
  return std::pow(sum, 1.0 / e.q);
}

struct LorentzNorm {
  double value = 0.0;
  bool divergent = false;  // profile has not decayed at r_max
};

inline LorentzNorm lorentz_norm_checked(const RadialProfile& f, const LorentzExponents& e) {
  LorentzNorm out;
  out.value = lorentz_norm(decreasing_rearrangement(f), e);
  const double peak = f.sup_norm();
  if (!std::isinf(e.p) && peak > 0.0 && f.size() > 0)
    out.divergent = std::abs(f.values[static_cast<Eigen::Index>(f.size() - 1)]) > 1e-6 * peak;
  return out;
}

inline double lorentz_norm(const RadialProfile& f, const LorentzExponents& e) {
  return lorentz_norm(decreasing_rearrangement(f), e);
}

/// sup_h h mu{|f| > h}^{1/p}, the weak-type formulation of the (p, inf) norm.
inline double weak_norm_by_heights(const RadialProfile& f, double p) {
  const RearrangementTable t = decreasing_rearrangement(f);
  double sup = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    // heights just below values[k] see every cell at or above it
    const double h = t.values[k];
    double m = t.levels[k];
    for (std::size_t j = k + 1; j < t.size() && t.values[j] == h; ++j) m = t.levels[j];
    sup = std::max(sup, h * std::pow(m, 1.0 / p));
  }
  return sup;
}

struct HolderReport {
  double lhs = 0.0;    // ||fg||_{(p3,r3)}
  double rhs = 0.0;    // ||f||_{(p1,r1)} ||g||_{(p2,r2)}
  double ratio = 0.0;  // lhs / rhs, zero when both vanish
  double bound = 0.0;  // rearrangement-inequality constant for these exponents
  bool holds = true;
};

inline double inverse_exponent(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

/// Measured constant of ||fg|| <= C ||f|| ||g||. `bound` is the constant that
/// (fg)*(s) <= f*(s/2) g*(s/2) followed by Hoelder in L^r(ds/s) yields.
inline HolderReport holder_check(const RadialProfile& f, const RadialProfile& g, const LorentzExponents& e1,
                                 const LorentzExponents& e2, const LorentzExponents& e3) {
  require_same_grid(f, g);
  const double ip = inverse_exponent(e1.p) + inverse_exponent(e2.p);
  require(std::abs(inverse_exponent(e3.p) - ip) <= 1e-12, ErrorCode::Precondition, "Hoelder needs 1/p3 = 1/p1 + 1/p2");
  const double ir = inverse_exponent(e1.q) + inverse_exponent(e2.q);
  require(ir >= inverse_exponent(e3.q) - 1e-12, ErrorCode::Precondition, "Hoelder needs 1/r1 + 1/r2 >= 1/r3");
  HolderReport rep;
  const RadialProfile fg(f.grid, f.values.cwiseProduct(g.values));
  rep.lhs = lorentz_norm(fg, e3);
  rep.rhs = lorentz_norm(f, e1) * lorentz_norm(g, e2);
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  const double ip3 = inverse_exponent(e3.p);
  rep.bound = std::pow(2.0, ip3);
  if (ir > 0.0 && ip3 > 0.0) {
    // move from r3' = 1/ir up to r3 with the inclusion constant (r3'/p3)^{1/r3' - 1/r3}
    const double gap = ir - inverse_exponent(e3.q);
    rep.bound *= std::pow(ip3 / ir, gap);
  }
  rep.holds = rep.lhs <= rep.bound * rep.rhs * (1.0 + 1e-12) + 1e-300;
  return rep;
}

struct InclusionReport {
  std::vector<double> q_values;  // 1, q1, p, q2, inf
  std::vector<double> norms;
  std::vector<double> ratios;  // norms[k+1] / norms[k]
  std::vector<double> bounds;  // (q_k/p)^{1/q_k - 1/q_{k+1}}
  bool holds = true;
};

/// Checks ||f||_{(p,r)} <= (q/p)^{1/q - 1/r} ||f||_{(p,q)} along the chain
/// 1 <= q1 <= p <= q2 <= inf.
inline InclusionReport inclusion_check(const RadialProfile& f, double p, double q1, double q2) {
  require(1.0 <= q1 && q1 <= p && p <= q2, ErrorCode::Precondition, "inclusion chain needs 1 <= q1 <= p <= q2 <= inf");
  InclusionReport rep;
  rep.q_values = {1.0, q1, p, q2, kInf};
  const RearrangementTable t = decreasing_rearrangement(f);
  for (double q : rep.q_values) rep.norms.push_back(lorentz_norm(t, LorentzExponents(p, q)));
  for (std::size_t k = 0; k + 1 < rep.norms.size(); ++k) {
    const double q = rep.q_values[k], r = rep.q_values[k + 1];
    const double bound = std::pow(q / p, 1.0 / q - inverse_exponent(r));
    rep.bounds.push_back(bound);
    rep.ratios.push_back(rep.norms[k] > 0.0 ? rep.norms[k + 1] / rep.norms[k] : 0.0);
    rep.holds = rep.holds && rep.norms[k + 1] <= bound * rep.norms[k] * (1.0 + 1e-12) + 1e-300;
  }
  return rep;
}

}  // namespace hyperwave
