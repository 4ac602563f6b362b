#include "concmeas/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "concmeas/errors.hpp"
#include "concmeas/quadrature.hpp"

namespace concmeas {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPanels = 400;
constexpr double kRescaleThreshold = 1e150;

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha", "must be positive and finite");
}

double degree_scale(const FreudSystem& sys, int n) { return n > 0 ? std::pow(static_cast<double>(n), 1.0 / sys.alpha) : 1.0; }

void require_degree(const FreudSystem& sys, int n) {
  if (n < 0 || n > sys.n_max) throw NumericError(ErrorKind::Domain, "polynomial degree outside the built range", n);
}

// Values p_0..p_n at every node of a half-line rule.
std::vector<std::vector<double>> poly_table(const FreudSystem& sys, const std::vector<double>& nodes, int n) {
  std::vector<std::vector<double>> P(static_cast<std::size_t>(n) + 1, std::vector<double>(nodes.size()));
  const double p0 = 1.0 / std::sqrt(sys.mu0);
  std::fill(P[0].begin(), P[0].end(), p0);
  for (int k = 0; k < n; ++k) {
    const auto& cur = P[static_cast<std::size_t>(k)];
    auto& next = P[static_cast<std::size_t>(k) + 1];
    const double ak = sys.a[static_cast<std::size_t>(k)];
    const double ak1 = sys.a[static_cast<std::size_t>(k) + 1];
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double prev = k > 0 ? P[static_cast<std::size_t>(k) - 1][j] : 0.0;
      next[j] = (nodes[j] * cur[j] - ak * prev) / ak1;
    }
  }
  return P;
}

quad::Rule weighted_rule(double alpha, double kappa, double X, int panels) {
  quad::Rule r = quad::composite_gauss_legendre(0.0, X, panels);
  for (std::size_t j = 0; j < r.nodes.size(); ++j) r.weights[j] *= std::exp(-kappa * std::pow(r.nodes[j], alpha));
  return r;
}

// p_n(x) as mantissa * exp(log_scale).
double poly_scaled(const FreudSystem& sys, int n, double x, double& log_scale) {
  log_scale = 0.0;
  double prev = 0.0;
  double cur = 1.0 / std::sqrt(sys.mu0);
  for (int k = 0; k < n; ++k) {
    const double next = (x * cur - sys.a[static_cast<std::size_t>(k)] * prev) / sys.a[static_cast<std::size_t>(k) + 1];
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleThreshold) {
      cur /= kRescaleThreshold;
      prev /= kRescaleThreshold;
      log_scale += std::log(kRescaleThreshold);
    }
  }
  return cur;
}

std::string freud_name(double alpha) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "freud:alpha=%g", alpha);
  return buf;
}

}  // namespace

double kappa_alpha(double alpha) {
  require_alpha(alpha);
  return std::tgamma(0.5 * alpha) * std::sqrt(kPi) / std::tgamma(0.5 * (alpha + 1.0));
}

FreudSystem build_recurrence(double alpha, int n_max) {
  require_alpha(alpha);
  if (n_max < 1 || n_max > kFreudMaxDegree) throw ConfigError("n_max", "must lie in [1, 60]");
  FreudSystem sys;
  sys.alpha = alpha;
  sys.kappa = kappa_alpha(alpha);
  sys.n_max = n_max;
  sys.truncation = 2.0 * std::pow(n_max + 1.0, 1.0 / alpha) + std::pow(80.0 / sys.kappa, 1.0 / alpha);

  const quad::Rule rule = weighted_rule(alpha, sys.kappa, sys.truncation, kPanels);
  sys.nodes = rule.nodes;
  sys.weights = rule.weights;

  double mass = 0.0;
  for (double w : sys.weights) mass += 2.0 * w;
  sys.mu0 = mass;

  sys.a.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  sys.b.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  const std::size_t m = sys.nodes.size();
  std::vector<double> prev(m, 0.0), cur(m, 1.0 / std::sqrt(mass)), next(m);
  for (int n = 0; n < n_max; ++n) {
    const double an = sys.a[static_cast<std::size_t>(n)];
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      next[j] = sys.nodes[j] * cur[j] - an * prev[j];
      s += 2.0 * sys.weights[j] * next[j] * next[j];
    }
    const double a1 = std::sqrt(s);
    if (!(a1 > 0.0) || !std::isfinite(a1))
      throw NumericError(ErrorKind::Precision, "Stieltjes recursion broke down at degree " + std::to_string(n + 1), n + 1);
    sys.a[static_cast<std::size_t>(n) + 1] = a1;
    for (std::size_t j = 0; j < m; ++j) next[j] /= a1;
    std::swap(prev, cur);
    std::swap(cur, next);
  }

  // independent check on a rule with twice the panels
  const quad::Rule check = weighted_rule(alpha, sys.kappa, sys.truncation, 2 * kPanels);
  const auto P = poly_table(sys, check.nodes, n_max);
  double drift = 0.0;
  int first_bad = -1;
  for (int n = 0; n <= n_max; ++n) {
    for (int k = n % 2; k <= n; k += 2) {
      double g = 0.0;
      const auto& pn = P[static_cast<std::size_t>(n)];
      const auto& pk = P[static_cast<std::size_t>(k)];
      for (std::size_t j = 0; j < check.nodes.size(); ++j) g += 2.0 * check.weights[j] * pn[j] * pk[j];
      const double dev = std::abs(g - (n == k ? 1.0 : 0.0));
      drift = std::max(drift, dev);
      if (dev > 1e-8 && first_bad < 0) first_bad = n;
    }
  }
  sys.orthonormality_drift = drift;
  if (first_bad >= 0)
    throw NumericError(ErrorKind::Precision,
                       "orthonormality lost at degree " + std::to_string(first_bad) + "; extended precision required",
                       first_bad);
  return sys;
}

double orthonormal_poly(const FreudSystem& sys, int n, double x) {
  require_degree(sys, n);
  double log_scale = 0.0;
  const double p = poly_scaled(sys, n, x, log_scale);
  return log_scale == 0.0 ? p : p * std::exp(log_scale);
}

double rescaled_poly_density(const FreudSystem& sys, int n, double x, bool* underflow) {
  require_degree(sys, n);
  if (underflow) *underflow = false;
  const double s = degree_scale(sys, n);
  const double y = s * x;
  double log_scale = 0.0;
  const double p = poly_scaled(sys, n, y, log_scale);
  if (p == 0.0) return 0.0;
  const double log_value = std::log(s) + 2.0 * (std::log(std::abs(p)) + log_scale) - sys.kappa * std::pow(std::abs(y), sys.alpha);
  if (log_value < -745.0) {
    if (underflow) *underflow = true;
    return 0.0;
  }
  return std::exp(log_value);
}

double rescaled_poly_integral(const FreudSystem& sys, int n, const std::function<double(double)>& f) {
  require_degree(sys, n);
  const double s = degree_scale(sys, n);
  double total = 0.0;
  for (std::size_t j = 0; j < sys.nodes.size(); ++j) {
    const double w = sys.weights[j];
    if (w == 0.0) continue;
    const double y = sys.nodes[j];
    const double p = orthonormal_poly(sys, n, y);
    total += w * p * p * (f(y / s) + f(-y / s));
  }
  return total;
}

double window_average(const FreudSystem& sys, int n, double x, double width) {
  if (!(width > 0.0)) throw NumericError(ErrorKind::Domain, "window_average: width must be positive", width);
  const quad::Rule r = quad::composite_gauss_legendre(x - 0.5 * width, x + 0.5 * width, 8);
  return r.apply([&](double t) { return rescaled_poly_density(sys, n, t); }) / width;
}

double sup_weighted_density(const FreudSystem& sys, int n, const std::vector<double>& xs) {
  double best = 0.0;
  for (double x : xs) best = std::max(best, rescaled_poly_density(sys, n, x) * std::sqrt(std::abs(1.0 - x * x)));
  return best;
}

double freud_growth_slope(const FreudSystem& sys, int n_lo) {
  n_lo = std::max(n_lo, 1);
  if (n_lo >= sys.n_max) throw NumericError(ErrorKind::Domain, "freud_growth_slope: need at least two degrees", n_lo);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int cnt = 0;
  for (int n = n_lo; n <= sys.n_max; ++n) {
    const double lx = std::log(static_cast<double>(n));
    const double ly = std::log(sys.a[static_cast<std::size_t>(n)]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

FreudReport arcsine_convergence_report(const std::vector<double>& alphas, const std::vector<int>& n_list,
                                       const std::vector<TestFunction>& panel) {
  if (n_list.empty()) throw ConfigError("n_list", "must not be empty");
  const int top = *std::max_element(n_list.begin(), n_list.end());
  const LimitDensity arcsine = make_limit_density(2.0);
  std::vector<double> targets;
  for (const TestFunction& tf : panel) targets.push_back(limit_integral(arcsine, tf.f, tf.breakpoints));

  FreudReport rep;
  rep.n_list = n_list;
  for (const TestFunction& tf : panel) rep.f_names.push_back(tf.name);
  for (double alpha : alphas) {
    const FreudSystem sys = build_recurrence(alpha, top);
    ConvergenceReport r;
    r.potential = freud_name(alpha);
    r.beta = 2.0;
    r.family = "freud";
    r.k_list = n_list;
    for (std::size_t j = 0; j < panel.size(); ++j) {
      ConvergenceRow row;
      row.f_name = panel[j].name;
      for (int n : n_list) row.errors.push_back(std::abs(rescaled_poly_integral(sys, n, panel[j].f) - targets[j]));
      row.trend = trend_of(row.errors);
      r.rows.push_back(std::move(row));
    }
    rep.per_alpha.push_back(std::move(r));
  }
  rep.spread.assign(n_list.size(), std::vector<double>(panel.size(), 0.0));
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    for (std::size_t j = 0; j < panel.size(); ++j) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const ConvergenceReport& r : rep.per_alpha) {
        lo = std::min(lo, r.rows[j].errors[i]);
        hi = std::max(hi, r.rows[j].errors[i]);
      }
      rep.spread[i][j] = rep.per_alpha.empty() ? 0.0 : hi - lo;
    }
  }
  return rep;
}

double phase_function_psi(double alpha, double x) {
  require_alpha(alpha);
  if (!(x > 0.0 && x <= 1.0)) throw NumericError(ErrorKind::Domain, "phase_function_psi: x must lie in (0, 1]", x);
  if (x == 1.0) return 0.0;
  const double T = std::acosh(1.0 / x);
  quad::Options opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 0.0;
  const double I = quad::adaptive([alpha](double t) { return std::pow(std::cosh(t), alpha - 1.0); }, 0.0, T, opt).value;
  return alpha / kPi * std::pow(x, alpha - 1.0) * I;
}

}  // namespace concmeas
