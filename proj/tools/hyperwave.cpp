// Experiment driver: parameter tables, invariant suites and the nonlinear
// solve / scattering / stability runs, each writing CSVs under --out.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hyperwave/experiment.hpp"
#include "selftest.hpp"

namespace fs = std::filesystem;
using namespace hyperwave;
using hyperwave::tools::Check;

namespace {

enum Exit { kPass = 0, kConstraint = 1, kNumerical = 2, kIO = 3 };

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Report {
  fs::path dir;
  std::vector<Check> checks;
  std::string text;

  void line(const std::string& s) {
    text += s + "\n";
    std::cout << s << "\n";
  }
  void check(Check c) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-4s %-52s %.6g (limit %.6g)", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value, c.threshold);
    line(buf);
    checks.push_back(std::move(c));
  }
  void flag(const std::string& name, bool ok) { check({name, ok ? 0.0 : 1.0, 0.0, ok}); }

  std::string path(const std::string& file) const { return (dir / file).string(); }

  int finish() {
    CsvWriter csv(path("checks.csv"), {"index", "value", "threshold", "pass"});
    for (std::size_t i = 0; i < checks.size(); ++i)
      csv.row({double(i), checks[i].value, checks[i].threshold, checks[i].pass ? 1.0 : 0.0});
    std::ofstream names(path("checks.txt"));
    for (std::size_t i = 0; i < checks.size(); ++i) names << i << " " << checks[i].name << "\n";
    std::ofstream summary(path("summary.txt"));
    summary << text;
    require(static_cast<bool>(summary), ErrorCode::IO, "cannot write summary");
    for (const auto& c : checks)
      if (!c.pass) return kNumerical;
    return kPass;
  }
};

void write_effective_config(const ExperimentConfig& cfg, const fs::path& dir) {
  std::ofstream out(dir / "effective.cfg");
  out << cfg.to_string();
  require(static_cast<bool>(out), ErrorCode::IO, "cannot write effective config");
}

void write_fit_summary(const std::string& path, const DecayFit& fit, double h) {
  std::ofstream out(path);
  out << "{\"h\": " << format_double(h) << ", \"t1\": " << format_double(fit.t1) << ", \"t2\": " << format_double(fit.t2)
      << ", \"slope\": " << format_double(fit.slope) << ", \"target\": " << format_double(fit.target)
      << ", \"tolerance\": " << format_double(kSlopeTolerance) << ", \"samples\": " << fit.samples
      << ", \"decayed_to_floor\": " << (fit.decayed_to_floor ? "true" : "false")
      << ", \"pass\": " << (fit.pass ? "true" : "false") << "}\n";
  require(static_cast<bool>(out), ErrorCode::IO, "cannot write " + path);
}

int run_params(const ExperimentConfig& cfg, Report& rep) {
  const ParameterSet ps = derive(cfg.n, cfg.b, cfg.sigma, cfg.h, cfg.d, cfg.t0);
  const AdmissibleRange range = admissible_range(cfg.n, cfg.sigma);
  CsvWriter csv(rep.path("params.csv"), {"n", "b", "sigma", "beta", "alpha_tilde", "alpha", "b_alpha", "one_minus_b_alpha",
                                          "b_low", "b_high", "local_upper_bound", "t0", "c_phi", "delta"});
  csv.row({double(ps.n), ps.b, ps.sigma, ps.beta, ps.alpha_tilde, ps.alpha, ps.b * ps.alpha, 1.0 - ps.b * ps.alpha,
           range.b_low, range.b_high, local_upper_bound(ps.n), ps.t0, ps.c_phi, ps.delta});
  char buf[160];
  const std::pair<const char*, double> rows[] = {
      {"beta", ps.beta},         {"alpha~", ps.alpha_tilde},          {"alpha", ps.alpha},
      {"b alpha", ps.b * ps.alpha}, {"1 - b alpha", 1.0 - ps.b * ps.alpha}, {"b_low(n, sigma)", range.b_low},
      {"b_high(n)", range.b_high}, {"local upper bound", local_upper_bound(ps.n)}, {"C_phi (t0)", ps.c_phi}};
  for (const auto& [k, v] : rows) {
    std::snprintf(buf, sizeof buf, "%-20s %.12g", k, v);
    rep.line(buf);
  }
  for (const auto& r : identity_residuals(ps)) rep.check(tools::at_most(r.relation, std::abs(r.value), 1e-12));
  return rep.finish();
}

int run_selftest(const Experiment& ex, unsigned seed, Report& rep) {
  std::vector<tools::LorentzRow> rows;
  for (auto& c : tools::selftest(ex, seed, &rows)) rep.check(std::move(c));
  tools::write_lorentz_rows(rep.path("lorentz_checks.csv"), rows);
  return rep.finish();
}

DispersiveReport dispersive_on(const ExperimentConfig& cfg, int scale, double r) {
  const auto rg = RadialGrid::gauss_legendre(cfg.n, cfg.r_max, cfg.r_panels * scale, cfg.r_order);
  const auto sg = SpectralGrid::gauss_legendre(cfg.n, cfg.lambda_max, cfg.lambda_panels * scale, cfg.lambda_order);
  const Propagator prop(SphericalTransform::make(rg, sg), MassParameter(cfg.dispersive_c, cfg.n));
  const double w = cfg.data_width;
  const auto g = RadialProfile::sample(rg, [w](double x) { return std::exp(-(x / w) * (x / w)); });
  std::vector<double> ts;
  const int m = cfg.dispersive_samples * scale;
  for (int k = 0; k <= m; ++k) ts.push_back(cfg.dispersive_t_min * std::pow(cfg.t_max / cfg.dispersive_t_min, double(k) / m));
  return dispersive_ratio(prop, g, cfg.b + 1.0, r, ts, cfg.threads);
}

int run_dispersive(const ExperimentConfig& cfg, const ParameterSet& ps, Report& rep) {
  for (double r : {cfg.b + 1.0, kInf}) {
    const auto base = dispersive_on(cfg, 1, r);
    const auto fine = dispersive_on(cfg, 2, r);
    const std::string tag = std::isinf(r) ? "inf" : "p";
    base.write_csv(rep.path("dispersive_r" + tag + ".csv"));
    fine.write_csv(rep.path("dispersive_r" + tag + "_refined.csv"));
    if (base.wdot_skipped) rep.line("note: cos(tD)/D term skipped (spectral mass at omega = 0)");
    rep.check(tools::at_most("sup ratio finite, r = " + tag, base.sup_ratio, 1e300));
    rep.check(tools::at_most("sup ratio change under grid doubling, r = " + tag,
                             std::abs(fine.sup_ratio - base.sup_ratio) / base.sup_ratio, 0.05));
  }
  double worst = kInf;
  for (int k = 1; k <= 1000; ++k) {
    const double t = 0.01 * k;
    worst = std::min(worst, ps.c_phi * envelope_shape(t, ps.p(), ps.n, ps.t0) - phi_p(t, ps.p(), ps.n));
  }
  rep.check({"envelope minus phi_p (min over 1000 t)", worst, 0.0, worst >= 0.0});
  return rep.finish();
}

void report_run(const Experiment::Run& run, Report& rep) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "epsilon %.6g  K %.6g  L %.6g  iterations %d  ||u||_E %.12g", run.epsilon,
                run.diag.K_measured, run.diag.L, run.traj.iterations, run.diag.solution_norm);
  rep.line(buf);
}

int run_solve(const Experiment& ex, const std::string& mode, Report& rep) {
  const auto& cfg = ex.config();
  const DuhamelSolver& solver = ex.solver();
  if (mode == "local") {
    const WaveState data = ex.bump_data(1.0);
    const TrajectorySolution traj = solver.solve_local(data, cfg.local_T);
    traj.write_csv(rep.path("solution_local.csv"));
    rep.line("local solve converged on [0, " + format_double(traj.grid.t_max()) + "] in " +
             std::to_string(traj.iterations) + " iterations");
    const auto g = traj.grid.nodes;
    rep.check(tools::at_most("sup t^beta ||u||_(b+1,d)", DuhamelSolver::local_weighted(g, traj.norm_d, ex.params().beta), 1e300));
    return rep.finish();
  }
  const Experiment::Run run = ex.global_run();
  report_run(run, rep);
  run.diag.write_csv(rep.path("iterations.csv"));
  run.traj.write_csv(rep.path("solution.csv"));
  rep.check(tools::at_most("measured L", run.diag.L, 1.0));
  rep.flag("difference ratios <= L", run.diag.ratios_within_L());
  rep.check(tools::at_most("||u||_E / data norm", run.diag.solution_norm / run.diag.epsilon, 2.0));
  rep.check(tools::at_most("residual (bisected quadrature)", solver.residual(run.traj, cfg.d), 10.0 * cfg.tol));
  for (const auto& p : run.diag.regularity)
    rep.flag("iterate bound d = " + label(p.d) + ", h = " + label(p.h), p.bound_holds);
  return rep.finish();
}

int run_scatter(const Experiment& ex, Report& rep) {
  const auto& cfg = ex.config();
  const ParameterSet& ps = ex.params();
  const DuhamelSolver& solver = ex.solver();
  const Experiment::Run run = ex.global_run();
  report_run(run, rep);
  const AsymptoticData plus = asymptotic_data(solver, run.traj, Direction::Plus, cfg.horizon_tol);
  const auto back = solver.solve_global(run.data, true).first;
  const AsymptoticData minus = asymptotic_data(solver, back, Direction::Minus, cfg.horizon_tol);
  rep.line("truncation bound (+) " + format_double(plus.truncation_bound) + ", (-) " + format_double(minus.truncation_bound));
  const double h_mid = 0.5 * (1.0 - ps.b * ps.alpha);
  const double t1 = ps.t0 + 2.0, t2 = cfg.t_max - 1.0;
  for (double d : {cfg.d}) {
    const DefectReport defect = scattering_defect(solver, run.traj, plus, d, ps.t0);
    rep.check(tools::at_most("dual-formula defect gap", defect.max_gap, 10.0 * (cfg.tol + solver.residual(run.traj, d))));
    for (double h : {0.0, 0.5 * h_mid, h_mid}) {
      const std::string tag = "_h" + label(h);
      defect.write_csv(rep.path("defect" + tag + ".csv"), ps, h);
      const DecayFit fit = decay_rate_fit(defect.t, defect.direct, t1, t2, ps.b * ps.alpha + h);
      fit.write_csv(rep.path("fit" + tag + ".csv"));
      write_fit_summary(rep.path("fit" + tag + ".json"), fit, h);
      rep.check({"defect slope, h = " + label(h), fit.slope, fit.target + kSlopeTolerance, fit.pass});
      std::vector<double> weighted;
      for (std::size_t k = 0; k < defect.t.size(); ++k) weighted.push_back(std::exp((ps.b * ps.alpha + h) * defect.t[k]) * defect.direct[k]);
      rep.flag("weighted defect decreasing, h = " + label(h), decreasing_over(defect.t, weighted, t1, t2, 0.25));
    }
  }
  CsvWriter csv(rep.path("asymptotic_data.csv"), {"lambda", "u0_plus", "u1_plus", "u0_minus", "u1_minus"});
  const auto& lam = ex.transform()->spectral_grid()->nodes;
  for (std::size_t j = 0; j < lam.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    csv.row({lam[j], plus.plus.u[i], plus.plus.ut[i], minus.plus.u[i], minus.plus.ut[i]});
  }
  return rep.finish();
}

int run_stability(const Experiment& ex, Report& rep) {
  const auto& cfg = ex.config();
  const Experiment::Run run = ex.global_run();
  report_run(run, rep);
  const WaveState other = ex.perturbed(run.data, run.data.ut.sup_norm());
  const TrajectorySolution other_sol = ex.solver().solve_global(other).first;
  const double h_mid = 0.5 * (1.0 - ex.params().b * ex.params().alpha);
  for (double h : {0.0, h_mid}) {
    const StabilityReport st = stability_traces(ex.solver(), run.traj, other_sol, h, cfg.d);
    st.write_csv(rep.path("stability_h" + label(h) + ".csv"));
    const std::string tag = ", h = " + label(h);
    rep.flag("linear-difference trace decreasing" + tag, st.linear_decreasing);
    rep.flag("solution-difference trace decreasing" + tag, st.solution_decreasing);
    rep.flag("triangle audit" + tag, st.audit_holds);
  }
  const StabilityReport same = stability_traces(ex.solver(), run.traj, run.traj, 0.0, cfg.d);
  rep.flag("identical data give zero traces", same.identically_zero);
  return rep.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperwave: Klein-Gordon on hyperbolic space, verification driver"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_dir, mode = "global";
  std::vector<std::string> overrides;
  int seed = -1, threads = -1;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--set", overrides, "override key=value (repeatable)")->take_all();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "worker threads");
  CLI::App* params = app.add_subcommand("params", "derived exponents and identity residuals");
  CLI::App* selftest = app.add_subcommand("selftest", "transform, propagator and Lorentz invariants");
  CLI::App* dispersive = app.add_subcommand("dispersive", "dispersive ratio sweep and grid-doubling study");
  CLI::App* solve = app.add_subcommand("solve", "Picard solve with contraction diagnostics");
  solve->add_option("--mode", mode, "global or local")->check(CLI::IsMember({"global", "local"}));
  CLI::App* scatter = app.add_subcommand("scatter", "asymptotic data and decay-rate fit");
  CLI::App* stability = app.add_subcommand("stability", "paired solves and weighted difference traces");
  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(config_path);
    for (const auto& kv : overrides) cfg.apply_override(kv);
    if (!out_dir.empty()) cfg.out = out_dir;
    if (seed >= 0) cfg.seed = seed;
    if (threads >= 0) cfg.threads = threads;
    cfg.validate();

    Report rep;
    rep.dir = cfg.out;
    std::error_code ec;
    fs::create_directories(rep.dir, ec);
    require(!ec, ErrorCode::IO, "cannot create output directory " + cfg.out);
    write_effective_config(cfg, rep.dir);

    if (params->parsed()) return run_params(cfg, rep);
    const Experiment ex(cfg);
    if (selftest->parsed()) return run_selftest(ex, static_cast<unsigned>(cfg.seed), rep);
    if (dispersive->parsed()) return run_dispersive(cfg, ex.params(), rep);
    if (solve->parsed()) return run_solve(ex, mode, rep);
    if (scatter->parsed()) return run_scatter(ex, rep);
    if (stability->parsed()) return run_stability(ex, rep);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    if (e.code() == ErrorCode::IO) return kIO;
    return is_constraint_error(e.code()) ? kConstraint : kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kNumerical;
}
