#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hyperwave/error.hpp"
#include "hyperwave/geometry.hpp"
#include "hyperwave/lorentz.hpp"

namespace hyperwave {

struct AdmissibleRange {
  double b_low = 0.0;
  double b_high = 0.0;

  bool empty() const { return !(b_low < b_high); }
  bool contains(double b) const { return b_low < b && b < b_high; }
};

/// Open interval of nonlinearity powers b admitted for the global theory at
/// dimension n and gap sigma.
inline AdmissibleRange admissible_range(int n, double sigma) {
  HyperbolicSpace space(n);
  require(sigma >= 0.0 && sigma < n - 1, ErrorCode::Domain, "sigma must lie in [0, n-1)");
  const double a = n + 1 + sigma;
  const double m = n - 1 - sigma;
  return {(a + std::sqrt(a * a + 8.0 * m)) / (2.0 * m), (n + 3.0) / (n - 1.0)};
}

/// Upper end of the local-theory range of b.
inline double local_upper_bound(int n) {
  HyperbolicSpace space(n);
  return (n + 1 + std::sqrt(static_cast<double>(n * n + 10 * n - 7))) / (2.0 * (n - 1));
}

/// Dispersive envelope exponent beta_p = (n-1)/2 (1 - 2/p).
inline double beta_exponent(int n, double p) { return 0.5 * (n - 1) * (1.0 - 2.0 / p); }

/// (1+|t|)^{2/p} / sinh(|t|)^{beta_p}.
inline double phi_p(double t, double p, int n) {
  HyperbolicSpace space(n);
  require(p >= 2.0 && p <= 2.0 * (n + 1) / (n - 1) + 1e-12, ErrorCode::Domain, "phi_p needs 2 <= p <= 2(n+1)/(n-1)");
  const double bp = beta_exponent(n, p);
  const double at = std::abs(t);
  if (at == 0.0) {
    if (bp > 0.0) fail(ErrorCode::Domain, "phi_p is singular at t = 0 for p > 2");
    return 1.0;
  }
  return std::pow(1.0 + at, 2.0 / p) / std::pow(std::sinh(at), bp);
}

struct EnvelopeFit {
  double t0 = 1.0;
  double constant = 0.0;
};

/// The two-branch bound C|t|^{2/p} e^{-beta_p|t|} (|t| >= t0), C|t|^{-beta_p}
/// (|t| < t0) evaluated without the constant.
inline double envelope_shape(double t, double p, int n, double t0) {
  const double at = std::abs(t);
  const double bp = beta_exponent(n, p);
  return at >= t0 ? std::pow(at, 2.0 / p) * std::exp(-bp * at) : std::pow(at, -bp);
}

/// Smallest C for which the two-branch envelope dominates phi_p on a dense
/// sample of (0, t_end].
inline EnvelopeFit find_t0(double p, int n, double t0 = 1.0, double t_end = 50.0, int samples = 20000) {
  HyperbolicSpace space(n);
  require(p > 2.0 && p < 2.0 * (n + 1) / (n - 1), ErrorCode::Domain, "find_t0 needs 2 < p < 2(n+1)/(n-1)");
  require(t0 >= 1.0, ErrorCode::Domain, "t0 must be >= 1");
  EnvelopeFit fit{t0, 0.0};
  auto consider = [&](double t) { fit.constant = std::max(fit.constant, phi_p(t, p, n) / envelope_shape(t, p, n, t0)); };
  // geometric below t0 so the |t|^{-beta_p} branch is probed near zero
  const int core = samples / 2;
  for (int i = 0; i < core; ++i) consider(t0 * std::pow(1e-6, 1.0 - static_cast<double>(i) / core));
  for (int i = 0; i <= samples - core; ++i) consider(t0 + (t_end - t0) * i / (samples - core));
  return fit;
}

/// B(1 - beta, 1 - b alpha~), the constant of the Beta-type convolution.
inline double beta_identity_constant(double beta, double b_alpha_tilde) {
  require(beta < 1.0 && b_alpha_tilde < 1.0, ErrorCode::DivergentIntegral,
          "int_0^t s^{-beta}(t-s)^{-b alpha~} ds diverges when either exponent is >= 1");
  const double x = 1.0 - beta, y = 1.0 - b_alpha_tilde;
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

struct ParameterSet {
  int n = 3;
  double b = 0.0;
  double sigma = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  double alpha_tilde = 0.0;
  double h = 0.0;
  double d = kInf;
  double t0 = 1.0;
  double delta = 0.5;
  double c_phi = 0.0;

  double p() const { return b + 1.0; }
  double p_dual() const { return (b + 1.0) / b; }
  LorentzExponents solution_exponents() const { return {b + 1.0, d}; }
  LorentzExponents data_exponents() const { return {(b + 1.0) / b, d}; }
  double h_upper() const { return 1.0 - b * alpha; }
};

struct Residual {
  std::string relation;
  double value = 0.0;
};

/// Residuals of the identities tying (beta, alpha, alpha~) to (n, b, sigma).
inline std::vector<Residual> identity_residuals(const ParameterSet& ps) {
  const double n = ps.n, b = ps.b;
  return {
      {"beta = (n-1)/2 (1 - 2/(b+1))", ps.beta - 0.5 * (n - 1) * (1.0 - 2.0 / (b + 1))},
      {"1 - (beta - sigma) = (b-1) alpha", 1.0 - (ps.beta - ps.sigma) - (b - 1) * ps.alpha},
      {"1 - beta = (b-1) alpha~", 1.0 - ps.beta - (b - 1) * ps.alpha_tilde},
      {"1 - b alpha = (beta - sigma) - alpha", (1.0 - b * ps.alpha) - ((ps.beta - ps.sigma) - ps.alpha)},
      {"1 - beta - b alpha~ = -alpha~", 1.0 - ps.beta - b * ps.alpha_tilde + ps.alpha_tilde},
      {"alpha~ = (n-1)/(b^2-1) - (n-3)/(2(b-1))",
       ps.alpha_tilde - ((n - 1) / (b * b - 1) - (n - 3) / (2 * (b - 1)))},
      {"alpha = alpha~ + sigma/(b-1)", ps.alpha - (ps.alpha_tilde + ps.sigma / (b - 1))},
  };
}

/// Names of the violated strict inequalities, empty when admissible.
inline std::vector<std::string> violated_constraints(const ParameterSet& ps) {
  std::vector<std::string> bad;
  const double n = ps.n, b = ps.b;
  const AdmissibleRange range = admissible_range(ps.n, std::max(0.0, std::min(ps.sigma, n - 1.5)));
  if (!(b > range.b_low))
    bad.push_back("b > " + std::to_string(range.b_low) + " (admissible lower bound)");
  if (!(b < range.b_high)) bad.push_back("b < (n+3)/(n-1) = " + std::to_string(range.b_high));
  if (!(ps.sigma > 0.0)) bad.push_back("sigma > 0");
  if (!(ps.sigma < ps.beta)) bad.push_back("sigma < beta");
  if (!(2.0 < b + 1 && b + 1 < 2.0 * (n + 1) / (n - 1))) bad.push_back("2 < b+1 < 2(n+1)/(n-1)");
  if (!(0.0 < b * ps.alpha_tilde)) bad.push_back("0 < b alpha~");
  if (!(b * ps.alpha_tilde < b * ps.alpha)) bad.push_back("b alpha~ < b alpha");
  if (!(b * ps.alpha < 1.0)) bad.push_back("b alpha < 1");
  if (!(ps.h >= 0.0 && ps.h < 1.0 - b * ps.alpha)) bad.push_back("0 <= h < 1 - b alpha");
  if (!(ps.d >= 1.0)) bad.push_back("d >= 1");
  if (!(ps.t0 >= 1.0)) bad.push_back("t0 >= 1");
  if (!(ps.delta > 0.0 && ps.delta < ps.t0)) bad.push_back("0 < delta < t0");
  return bad;
}

/// Derived exponents for (n, b, sigma); rejects inadmissible input naming
/// every violated relation.
inline ParameterSet derive(int n, double b, double sigma, double h = 0.0, double d = kInf, double t0 = 1.0) {
  HyperbolicSpace space(n);
  require(b > 1.0, ErrorCode::ConstraintViolation, "b > 1");
  require(sigma >= 0.0 && sigma < n - 1, ErrorCode::ConstraintViolation, "0 <= sigma < n-1");
  ParameterSet ps;
  ps.n = n;
  ps.b = b;
  ps.sigma = sigma;
  ps.beta = 0.5 * (n - 1) * (1.0 - 2.0 / (b + 1));
  ps.alpha_tilde = (1.0 - ps.beta) / (b - 1);
  ps.alpha = (1.0 - (ps.beta - sigma)) / (b - 1);
  ps.h = h;
  ps.d = d;
  ps.t0 = t0;
  ps.delta = 0.5 * t0;
  const auto bad = violated_constraints(ps);
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "inadmissible (n=" << n << ", b=" << b << ", sigma=" << sigma << "): violates";
    for (const auto& s : bad) msg << " [" << s << "]";
    fail(ErrorCode::ConstraintViolation, msg.str());
  }
  if (b + 1 > 2.0) ps.c_phi = find_t0(b + 1, n, t0).constant;
  return ps;
}

}  // namespace hyperwave
