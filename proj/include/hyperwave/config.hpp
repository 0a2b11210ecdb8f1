#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "hyperwave/csv.hpp"
#include "hyperwave/error.hpp"

namespace hyperwave {

/// Every knob of an experiment. Text form is one `key = value` per line; `#`
/// starts a comment.
struct ExperimentConfig {
  // Geometry and equation.
  int n = 3;
  double c = -1.0;
  double b = 2.7;
  double sigma = 0.05;
  double h = 0.0;
  double d = INFINITY;
  double t0 = 1.0;
  double mu = 1.0;
  int sign = 1;
  // Grids.
  double r_max = 15.0;
  int r_panels = 60;
  int r_order = 16;
  double lambda_max = 16.0;
  int lambda_panels = 40;
  int lambda_order = 16;
  double t_max = 10.0;
  int core_intervals = 40;
  int tail_intervals = 600;
  double grading = 2.0;
  int time_degree = 4;
  // Solver.
  double tol = 1e-8;
  int max_iter = 60;
  double epsilon = 0.0;  // 0 selects the largest 2^-k with measured L < 0.5
  double horizon_tol = 1e-3;
  double local_T = 1.0;
  int local_intervals = 120;
  // Data: u0 = u0_amplitude exp(-(r/w)^2), u1 = exp(-(r/w)^2) scaled to epsilon.
  double data_width = 1.0;
  double u0_amplitude = 0.0;
  double diff_amplitude = 0.1;
  double diff_width = 0.7071067811865476;
  // Dispersive sweep.
  double dispersive_c = 0.0;
  double dispersive_t_min = 0.05;
  int dispersive_samples = 200;
  // Run control.
  std::string out = "out";
  int seed = 0;
  int threads = 1;

  using Field = std::variant<int ExperimentConfig::*, double ExperimentConfig::*, std::string ExperimentConfig::*>;

  static const std::vector<std::pair<std::string, Field>>& fields() {
    using C = ExperimentConfig;
    static const std::vector<std::pair<std::string, Field>> f{
        {"n", &C::n},
        {"c", &C::c},
        {"b", &C::b},
        {"sigma", &C::sigma},
        {"h", &C::h},
        {"d", &C::d},
        {"t0", &C::t0},
        {"mu", &C::mu},
        {"sign", &C::sign},
        {"r_max", &C::r_max},
        {"r_panels", &C::r_panels},
        {"r_order", &C::r_order},
        {"lambda_max", &C::lambda_max},
        {"lambda_panels", &C::lambda_panels},
        {"lambda_order", &C::lambda_order},
        {"t_max", &C::t_max},
        {"core_intervals", &C::core_intervals},
        {"tail_intervals", &C::tail_intervals},
        {"grading", &C::grading},
        {"time_degree", &C::time_degree},
        {"tol", &C::tol},
        {"max_iter", &C::max_iter},
        {"epsilon", &C::epsilon},
        {"horizon_tol", &C::horizon_tol},
        {"local_T", &C::local_T},
        {"local_intervals", &C::local_intervals},
        {"data_width", &C::data_width},
        {"u0_amplitude", &C::u0_amplitude},
        {"diff_amplitude", &C::diff_amplitude},
        {"diff_width", &C::diff_width},
        {"dispersive_c", &C::dispersive_c},
        {"dispersive_t_min", &C::dispersive_t_min},
        {"dispersive_samples", &C::dispersive_samples},
        {"out", &C::out},
        {"seed", &C::seed},
        {"threads", &C::threads},
    };
    return f;
  }

  void set(const std::string& key, const std::string& value) {
    for (const auto& [name, field] : fields()) {
      if (name != key) continue;
      std::visit([&](auto member) { assign(this->*member, key, value); }, field);
      return;
    }
    fail(ErrorCode::Config, "unknown config key '" + key + "'");
  }

  std::string get(const std::string& key) const {
    for (const auto& [name, field] : fields())
      if (name == key) return std::visit([&](auto member) { return render(this->*member); }, field);
    fail(ErrorCode::Config, "unknown config key '" + key + "'");
  }

  /// Applies one `key=value` override.
  void apply_override(const std::string& kv) {
    const auto eq = kv.find('=');
    require(eq != std::string::npos, ErrorCode::Config, "override '" + kv + "' is not key=value");
    set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }

  void parse(std::istream& in, const std::string& origin = "config") {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      require(eq != std::string::npos, ErrorCode::Config, origin + ":" + std::to_string(lineno) + ": expected key = value");
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
  }

  static ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::IO, "cannot read config " + path);
    ExperimentConfig cfg;
    cfg.parse(in, path);
    return cfg;
  }

  static ExperimentConfig from_string(const std::string& text) {
    std::istringstream in(text);
    ExperimentConfig cfg;
    cfg.parse(in);
    return cfg;
  }

  /// Effective configuration; parses back to an equal value.
  std::string to_string() const {
    std::string s;
    for (const auto& [name, field] : fields()) s += name + " = " + get(name) + "\n";
    return s;
  }

  bool operator==(const ExperimentConfig& o) const { return to_string() == o.to_string(); }

  /// Range checks that need no numerics; model constraints are checked by derive().
  void validate() const {
    auto check = [](bool ok, const std::string& what) { require(ok, ErrorCode::Config, "invalid config: " + what); };
    check(n >= 2, "n >= 2");
    check(std::isfinite(c), "c finite");
    check(sign == 1 || sign == -1, "sign in {-1, 1}");
    check(r_max > 0 && r_panels >= 1 && r_order >= 2, "radial grid sizes positive");
    check(lambda_max > 0 && lambda_panels >= 1 && lambda_order >= 2, "spectral grid sizes positive");
    check(t_max > 0 && core_intervals >= 1 && tail_intervals >= 1, "time grid sizes positive");
    check(grading >= 1, "grading >= 1");
    check(time_degree >= 1 && time_degree <= 6, "time_degree in [1, 6]");
    check(tol > 0 && max_iter >= 1, "tol > 0 and max_iter >= 1");
    check(epsilon >= 0, "epsilon >= 0");
    check(horizon_tol > 0, "horizon_tol > 0");
    check(local_T > 0 && local_intervals >= 1, "local_T > 0 and local_intervals >= 1");
    check(data_width > 0 && diff_width > 0, "bump widths positive");
    check(dispersive_t_min > 0 && dispersive_samples >= 5, "dispersive_t_min > 0 and dispersive_samples >= 5");
    check(threads >= 1, "threads >= 1");
    check(d >= 1, "d >= 1");
  }

 private:
  static std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  static void assign(int& dst, const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    require(!v.empty() && *end == '\0', ErrorCode::Config, key + ": expected an integer, got '" + v + "'");
    dst = static_cast<int>(x);
  }
  static void assign(double& dst, const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    require(!v.empty() && *end == '\0' && !std::isnan(x), ErrorCode::Config, key + ": expected a number, got '" + v + "'");
    dst = x;
  }
  static void assign(std::string& dst, const std::string&, const std::string& v) { dst = v; }

  static std::string render(int v) { return std::to_string(v); }
  static std::string render(double v) { return format_double(v); }
  static std::string render(const std::string& v) { return v; }
};

}  // namespace hyperwave
