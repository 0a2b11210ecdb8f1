#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hyperwave/experiment.hpp"

namespace hyperwave::tools {

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// One row of the Lorentz-layer report: a measured inequality lhs <= C rhs.
struct LorentzRow {
  std::string test_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double grid_resolution = 0.0;  // radial nodes

  static LorentzRow of(std::string id, double lhs, double rhs, std::size_t nodes) {
    return {std::move(id), lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0, double(nodes)};
  }
};

inline void write_lorentz_rows(const std::string& path, const std::vector<LorentzRow>& rows) {
  CsvWriter csv(path, {"test_id", "lhs", "rhs", "ratio", "grid_resolution"});
  for (const auto& r : rows) csv.row(r.test_id, {r.lhs, r.rhs, r.ratio, r.grid_resolution});
}

inline Check at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, std::isfinite(value) && value <= threshold};
}

/// Random radial profile: a few Gaussian shells with random centers, widths and signs.
inline RadialProfile random_profile(const RadialGridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> center(0.0, 0.6 * g->r_max), width(0.2, 1.5), amp(-1.0, 1.0);
  std::vector<double> c(4), w(4), a(4);
  for (int i = 0; i < 4; ++i) {
    c[i] = center(rng);
    w[i] = width(rng);
    a[i] = amp(rng);
  }
  return RadialProfile::sample(g, [&](double r) {
    double v = 0.0;
    for (int i = 0; i < 4; ++i) v += a[i] * std::exp(-std::pow((r - c[i]) / w[i], 2));
    return v;
  });
}

/// Invariants of the transform, propagator and Lorentz layers on the
/// configured grids.
inline std::vector<Check> selftest(const Experiment& ex, unsigned seed, std::vector<LorentzRow>* rows = nullptr) {
  auto record = [rows](LorentzRow r) {
    if (rows) rows->push_back(std::move(r));
  };
  std::vector<Check> out;
  const auto& tr = *ex.transform();
  const auto& rg = ex.radial();
  const int n = ex.config().n;

  for (const auto& r : identity_residuals(ex.params())) out.push_back(at_most("identity: " + r.relation, std::abs(r.value), 1e-12));

  const auto gauss = RadialProfile::sample(rg, [](double r) { return std::exp(-r * r); });
  const auto back = tr.inverse(tr.forward(gauss));
  out.push_back(at_most("transform round trip (sup, relative)", (back.values - gauss.values).cwiseAbs().maxCoeff() / gauss.sup_norm(), 1e-6));
  out.push_back(at_most("Plancherel (relative)",
                        std::abs(tr.l2_physical(gauss) - tr.l2_spectral(tr.forward(gauss))) / tr.l2_physical(gauss), 1e-6));

  // Second-order convergence of the finite-difference eigenrelation.
  for (double lambda : {0.5, 1.0, 2.0, 4.0}) {
    std::vector<double> errs;
    for (int m : {400, 800}) {
      const auto ug = RadialGrid::uniform(n, 8.0, m + 1);
      const auto phi = RadialProfile::sample(ug, [&](double r) { return spherical_function(n, lambda, r); });
      const auto lap = apply_radial_laplacian(phi, n);
      double e = 0.0;
      for (std::size_t i = 0; i < ug->nodes.size(); ++i) {
        const double r = ug->nodes[i];
        if (r < 0.5 || r > 6.0) continue;
        e = std::max(e, std::abs(-lap.values[static_cast<Eigen::Index>(i)] - (lambda * lambda + 1.0) * phi.values[static_cast<Eigen::Index>(i)]));
      }
      errs.push_back(e);
    }
    const double order = std::log2(errs[0] / errs[1]);
    out.push_back({"eigenrelation order, lambda = " + format_double(lambda), order, 2.0, order >= 1.8 && order <= 2.2});
  }

  const Propagator& prop = ex.propagator();
  const SpectralState s0{Eigen::VectorXd::Zero(prop.omega().size()), tr.forward(gauss).values};
  const double e0 = prop.energy(s0);
  double drift = 0.0;
  for (int k = 1; k <= 50; ++k) drift = std::max(drift, std::abs(prop.energy(prop.linear_flow(0.1 * k, s0)) - e0) / e0);
  out.push_back(at_most("energy drift over [0, 5]", drift, 1e-8));
  const auto composed = prop.linear_flow(0.7, prop.linear_flow(0.3, s0));
  const auto direct = prop.linear_flow(1.0, s0);
  out.push_back(at_most("group property at (0.3, 0.7)",
                        (composed.u - direct.u).cwiseAbs().maxCoeff() / direct.u.cwiseAbs().maxCoeff(), 1e-6));

  // Indicator of a ball: closed-form Lorentz norms.
  const double R = 2.0;
  const auto ig = RadialGrid::gauss_legendre(n, 6.0, 48, 16, {R});
  const auto ind = RadialProfile::sample(ig, [R](double r) { return r < R ? 1.0 : 0.0; });
  const double V = ball_volume(n, R);
  double worst = 0.0;
  for (double p : {1.5, 2.0, 3.7})
    for (double q : {1.0, 2.0, 5.0, kInf}) {
      const double exact = std::isinf(q) ? std::pow(V, 1.0 / p) : std::pow(p / q, 1.0 / q) * std::pow(V, 1.0 / p);
      const double got = lorentz_norm(ind, LorentzExponents(p, q));
      worst = std::max(worst, std::abs(got - exact) / exact);
      record(LorentzRow::of("indicator_p" + format_double(p) + "_q" + format_double(q), got, exact, ig->size()));
    }
  out.push_back(at_most("indicator Lorentz norms vs closed form", worst, 1e-6));

  std::mt19937_64 rng(seed);
  double lp_err = 0.0, meas_err = 0.0;
  bool monotone = true, holder = true, inclusion = true;
  for (int i = 0; i < 20; ++i) {
    const auto f = random_profile(rg, rng);
    const auto g = random_profile(rg, rng);
    const auto t = decreasing_rearrangement(f);
    for (std::size_t k = 1; k < t.size(); ++k) monotone = monotone && t.values[k] <= t.values[k - 1];
    for (int k = 1; k <= 50; ++k) {
      const double height = f.sup_norm() * k / 51.0;
      const double mu = distribution_function(f, height);
      meas_err = std::max(meas_err, std::abs(t.distribution(height) - mu) / mu);
    }
    double lp = 0.0;
    for (std::size_t k = 0; k < rg->nodes.size(); ++k) lp += rg->weights[k] * std::pow(std::abs(f.values[static_cast<Eigen::Index>(k)]), 3.7);
    lp = std::pow(lp, 1.0 / 3.7);
    const double diag = lorentz_norm(f, LorentzExponents(3.7, 3.7));
    lp_err = std::max(lp_err, std::abs(diag - lp) / lp);
    const std::string id = "sample" + std::to_string(i);
    record(LorentzRow::of(id + "_pp_vs_Lp", diag, lp, rg->size()));
    const auto h = holder_check(f, g, LorentzExponents(3.7, 3.7), LorentzExponents(3.7, kInf), LorentzExponents(1.85, kInf));
    holder = holder && h.holds;
    record(LorentzRow::of(id + "_holder", h.lhs, h.rhs, rg->size()));
    const auto inc = inclusion_check(f, 3.7, 2.0, 6.0);
    inclusion = inclusion && inc.holds;
    record(LorentzRow::of(id + "_weak_vs_q6", lorentz_norm(f, LorentzExponents::weak(3.7)), lorentz_norm(f, LorentzExponents(3.7, 6.0)), rg->size()));
  }
  out.push_back(at_most("(p, p) norm vs L^p (relative)", lp_err, 1e-4));
  out.push_back(at_most("rearrangement equimeasurability (relative)", meas_err, 1e-12));
  out.push_back({"rearrangement monotone", monotone ? 0.0 : 1.0, 0.0, monotone});
  out.push_back({"Hoelder inequality", holder ? 0.0 : 1.0, 0.0, holder});
  out.push_back({"inclusion chain", inclusion ? 0.0 : 1.0, 0.0, inclusion});
  return out;
}

}  // namespace hyperwave::tools
