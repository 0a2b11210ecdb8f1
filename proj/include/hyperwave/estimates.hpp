#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hyperwave/csv.hpp"
#include "hyperwave/lorentz.hpp"
#include "hyperwave/parallel.hpp"
#include "hyperwave/params.hpp"
#include "hyperwave/propagator.hpp"

namespace hyperwave {

/// Lorentz norm of every column of a spectral matrix, evaluated physically.
inline std::vector<double> column_norms(const SphericalTransform& tr, const Eigen::MatrixXd& spectral_columns,
                                        const LorentzExponents& e, int threads = 1) {
  const Eigen::MatrixXd phys = tr.inverse_batch(spectral_columns);
  std::vector<double> out(static_cast<std::size_t>(phys.cols()));
  parallel_for(out.size(), threads, [&](std::size_t k) {
    out[k] = lorentz_norm(RadialProfile(tr.radial_grid(), phys.col(static_cast<Eigen::Index>(k))), e);
  });
  return out;
}

/// Sample times for sup evaluation: geometric on (t_min, t0), uniform on [t0, t_max].
inline std::vector<double> sup_time_grid(double t0, double t_max, int core_samples = 60, int tail_samples = 200,
                                         double t_min = 1e-3) {
  require(t_max > 0.0 && t0 > t_min, ErrorCode::Domain, "sup grid needs 0 < t_min < t0 and t_max > 0");
  std::vector<double> t;
  const double core_end = std::min(t0, t_max);
  for (int k = 0; k < core_samples; ++k) {
    const double s = t_min * std::pow(core_end / t_min, static_cast<double>(k) / core_samples);
    if (s < core_end) t.push_back(s);
  }
  if (t_max >= t0)
    for (int k = 0; k <= tail_samples; ++k) t.push_back(t0 + (t_max - t0) * k / tail_samples);
  else
    t.push_back(t_max);
  return t;
}

/// Discrete E^d_{alpha+h, alpha~+h} norm of a sampled trajectory.
struct WeightedNormReport {
  double tail_part = 0.0;
  double core_part = 0.0;
  double total = 0.0;
  bool complete = true;  // false when no sample reaches t0
  double gamma_linear = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> t, norm, weight, weighted;
  std::vector<int> branch;  // 0 core, 1 tail, -1 skipped (t = 0)

  void write_csv(const std::string& path) const {
    CsvWriter csv(path, {"t", "norm", "weight", "weighted_value", "branch"});
    for (std::size_t k = 0; k < t.size(); ++k) csv.row({t[k], norm[k], weight[k], weighted[k], double(branch[k])});
    CsvWriter summary(path + ".summary.csv", {"tail_part", "core_part", "total", "complete", "gamma_linear"});
    summary.row({tail_part, core_part, total, complete ? 1.0 : 0.0, gamma_linear});
  }
};

inline WeightedNormReport weighted_norm(const std::vector<double>& times, const std::vector<double>& norms,
                                        const ParameterSet& ps, double h = 0.0) {
  require(times.size() == norms.size(), ErrorCode::IncompatibleGrid, "times and norms differ in length");
  WeightedNormReport rep;
  rep.complete = false;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double at = std::abs(times[k]);
    double w = 0.0;
    int br = -1;
    if (at >= ps.t0) {
      w = std::exp((ps.alpha + h) * at);
      br = 1;
      rep.complete = true;
    } else if (at > 0.0) {
      w = std::pow(at, ps.alpha_tilde + h);
      br = 0;
    }
    const double v = br < 0 ? 0.0 : w * norms[k];
    if (br == 1) rep.tail_part = std::max(rep.tail_part, v);
    if (br == 0) rep.core_part = std::max(rep.core_part, v);
    rep.t.push_back(times[k]);
    rep.norm.push_back(norms[k]);
    rep.weight.push_back(w);
    rep.weighted.push_back(v);
    rep.branch.push_back(br);
  }
  rep.total = rep.tail_part + rep.core_part;
  return rep;
}

/// Linear flow of the data at the given times, one spectral column per time.
inline Eigen::MatrixXd linear_trajectory(const Propagator& prop, const SpectralState& data,
                                         const std::vector<double>& times) {
  Eigen::MatrixXd out(prop.omega().size(), static_cast<Eigen::Index>(times.size()));
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    for (Eigen::Index j = 0; j < out.rows(); ++j) {
      const double w = prop.omega()[j];
      out(j, static_cast<Eigen::Index>(k)) = std::cos(w * t) * data.u[j] + detail::sin_over(w, t) * data.ut[j];
    }
  }
  return out;
}

/// Gamma^d_{1,h}: weighted norm of the free evolution of the data.
inline WeightedNormReport data_norm_report(const Propagator& prop, const WaveState& data, const ParameterSet& ps,
                                           double d, double h, const std::vector<double>& times, int threads = 1) {
  const Eigen::MatrixXd lin = linear_trajectory(prop, prop.to_spectral(data), times);
  auto rep = weighted_norm(times, column_norms(*prop.transform(), lin, LorentzExponents(ps.b + 1.0, d), threads), ps, h);
  rep.gamma_linear = rep.total;
  return rep;
}

inline double data_norm(const Propagator& prop, const WaveState& data, const ParameterSet& ps, double d,
                        const std::vector<double>& times, double h = 0.0, int threads = 1) {
  return data_norm_report(prop, data, ps, d, h, times, threads).total;
}

struct DispersiveReport {
  double p = 0.0, r = 0.0;
  double data_norm = 0.0;  // ||g||_{(p', r)}
  std::vector<double> t, w_norm, wdot_norm, phi, ratio;
  double sup_ratio = 0.0;
  bool wdot_skipped = false;  // cos(tD)/D g singular (shifted case)

  void write_csv(const std::string& path) const {
    CsvWriter csv(path, {"t", "w_norm", "wdot_over_d_norm", "phi", "ratio"});
    for (std::size_t k = 0; k < t.size(); ++k) csv.row({t[k], w_norm[k], wdot_norm[k], phi[k], ratio[k]});
  }
};

/// (||W(t) g||_{(p,r)} + ||cos(tD)/D g||_{(p,r)}) / (phi_p(t) ||g||_{(p',r)}) at every sample t != 0.
inline DispersiveReport dispersive_ratio(const Propagator& prop, const RadialProfile& g, double p, double r,
                                         const std::vector<double>& times, int threads = 1) {
  const int n = prop.dimension();
  require(p > 2.0 && p < 2.0 * (n + 1) / (n - 1), ErrorCode::Precondition, "dispersive ratio needs 2 < p < 2(n+1)/(n-1)");
  require(g.sup_norm() > 0.0, ErrorCode::Precondition, "dispersive ratio needs g != 0");
  DispersiveReport rep;
  rep.p = p;
  rep.r = r;
  const LorentzExponents out_e(p, r), in_e(p / (p - 1.0), r);
  rep.data_norm = lorentz_norm(g, in_e);
  require(std::isfinite(rep.data_norm) && rep.data_norm > 0.0, ErrorCode::Precondition, "||g||_{(p',r)} must be finite");

  const Eigen::VectorXd gh = prop.spectral(g);
  try {
    prop.require_regular_at_zero(gh);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMultiplier) throw;
    rep.wdot_skipped = true;
  }
  std::vector<double> ts;
  for (double t : times)
    if (t != 0.0) ts.push_back(t);
  const auto nt = static_cast<Eigen::Index>(ts.size());
  Eigen::MatrixXd w(gh.size(), nt), wd(gh.size(), nt);
  for (Eigen::Index k = 0; k < nt; ++k) {
    const double t = ts[static_cast<std::size_t>(k)];
    w.col(k) = prop.W(t, gh);
    if (!rep.wdot_skipped) wd.col(k) = prop.Wdot_over_D(t, gh);
  }
  rep.w_norm = column_norms(*prop.transform(), w, out_e, threads);
  rep.wdot_norm = rep.wdot_skipped ? std::vector<double>(ts.size(), 0.0) : column_norms(*prop.transform(), wd, out_e, threads);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double ph = phi_p(ts[k], p, n);
    rep.t.push_back(ts[k]);
    rep.phi.push_back(ph);
    rep.ratio.push_back((rep.w_norm[k] + rep.wdot_norm[k]) / (ph * rep.data_norm));
    rep.sup_ratio = std::max(rep.sup_ratio, rep.ratio.back());
  }
  require(std::isfinite(rep.sup_ratio), ErrorCode::Resolution, "dispersive ratio is not finite");
  return rep;
}

}  // namespace hyperwave
