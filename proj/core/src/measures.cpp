#include "concmeas/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include "concmeas/errors.hpp"
#include "concmeas/quadrature.hpp"

namespace concmeas {

namespace {

constexpr double kPi = std::numbers::pi;

void require_beta(double beta) {
  if (!(beta > 0.0)) throw NumericError(ErrorKind::Domain, "beta must be positive", beta);
}

quad::Options tight() {
  quad::Options opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-14;
  opt.max_intervals = 8000;
  return opt;
}

// 1 - (1 - tau^2)^beta without cancellation near tau = 0.
double one_minus_pow(double tau, double beta) { return -std::expm1(beta * std::log1p(-tau * tau)); }

// Integral over [0, 1] of g(x) (1 - x^beta)^{-1/2} through x = 1 - tau^2.
double half_integral(double beta, const std::function<double(double)>& g, const std::vector<double>& xs_break) {
  auto integrand = [&](double tau) {
    if (tau == 0.0) return 2.0 * g(1.0) / std::sqrt(beta);
    return 2.0 * tau * g(1.0 - tau * tau) / std::sqrt(one_minus_pow(tau, beta));
  };
  std::vector<double> pts{0.0, 1.0};
  for (double b : xs_break)
    if (b > 0.0 && b < 1.0) pts.push_back(std::sqrt(1.0 - b));
  return quad::piecewise(integrand, pts, tight()).value;
}

}  // namespace

double omega_const(double beta) {
  require_beta(beta);
  if (std::isinf(beta)) return 2.0;
  return 2.0 * std::sqrt(kPi) * std::tgamma(1.0 + 1.0 / beta) / std::tgamma(0.5 + 1.0 / beta);
}

double LimitDensity::operator()(double x) const noexcept {
  const double ax = std::abs(x);
  if (!(ax < 1.0)) return 0.0;
  if (std::isinf(beta)) return normalization;
  return normalization / std::sqrt(1.0 - std::pow(ax, beta));
}

LimitDensity make_limit_density(double beta) {
  require_beta(beta);
  return LimitDensity{beta, 1.0 / omega_const(beta)};
}

double limit_density(double beta, double x) { return make_limit_density(beta)(x); }

double limit_integral(const LimitDensity& mu, const std::function<double(double)>& f,
                      const std::vector<double>& breakpoints) {
  if (std::isinf(mu.beta)) {
    std::vector<double> pts{-1.0, 1.0};
    for (double b : breakpoints)
      if (b > -1.0 && b < 1.0) pts.push_back(b);
    return mu.normalization * quad::piecewise(f, pts, tight()).value;
  }
  std::vector<double> right, left;
  for (double b : breakpoints) {
    if (b > 0.0) right.push_back(b);
    if (b < 0.0) left.push_back(-b);
  }
  const double pos = half_integral(mu.beta, f, right);
  const double neg = half_integral(mu.beta, [&](double x) { return f(-x); }, left);
  return mu.normalization * (pos + neg);
}

double limit_mass(double beta) {
  return limit_integral(make_limit_density(beta), [](double) { return 1.0; });
}

std::vector<double> default_measure_grid() {
  constexpr int n = 4096;
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = -1.5 + 3.0 * i / (n - 1);
  return g;
}

DensityOnGrid rescaled_measure(const Eigenpair& pair, double x_lambda, const std::vector<double>& grid,
                               bool require_unit_mass) {
  if (!(x_lambda > 0.0)) throw NumericError(ErrorKind::Domain, "rescaled_measure: x_lambda must be positive", x_lambda);
  if (grid.size() < 2) throw NumericError(ErrorKind::Domain, "rescaled_measure: grid needs two points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw NumericError(ErrorKind::Domain, "rescaled_measure: grid must be strictly increasing", grid[i]);
  if (pair.psi.size() < 4) throw NumericError(ErrorKind::Domain, "rescaled_measure: eigenfunction has too few samples");

  std::vector<double> xs(pair.psi.size());
  std::vector<double> ys(pair.psi.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = pair.x(i);
    ys[i] = pair.psi[i] * pair.psi[i];
  }
  const double x_end = xs.back();
  boost::math::interpolators::pchip<std::vector<double>> sq(std::move(xs), std::move(ys));

  DensityOnGrid out;
  out.grid = grid;
  out.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = std::abs(x_lambda * grid[i]);
    out.values[i] = y < x_end ? x_lambda * std::max(sq(y), 0.0) : 0.0;
  }
  out.mass = integrate(out, [](double) { return 1.0; });
  if (require_unit_mass && std::abs(out.mass - 1.0) > 1e-4)
    throw NumericError(ErrorKind::MassDeficit, "rescaled_measure: grid does not cover the support", out.mass);
  return out;
}

DensityOnGrid rescaled_measure(const Eigenpair& pair, double x_lambda) {
  return rescaled_measure(pair, x_lambda, default_measure_grid(), true);
}

double integrate(const DensityOnGrid& density, const std::function<double(double)>& f) {
  const auto& g = density.grid;
  const auto& v = density.values;
  double s = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) s += 0.5 * (g[i] - g[i - 1]) * (f(g[i - 1]) * v[i - 1] + f(g[i]) * v[i]);
  return s;
}

double mass_outside(const DensityOnGrid& density, double a) {
  return integrate(density, [a](double x) { return std::abs(x) > a ? 1.0 : 0.0; });
}

std::vector<TestFunction> default_panel() {
  auto bump = [](double x) {
    const double s = (x - 0.5) / 0.3;
    if (!(std::abs(s) < 1.0)) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
  };
  return {
      {"one", [](double) { return 1.0; }, {}},
      {"x2", [](double x) { return x * x; }, {}},
      {"cos_pi_x", [](double x) { return std::cos(kPi * x); }, {}},
      {"abs_x", [](double x) { return std::abs(x); }, {0.0}},
      {"bump", bump, {0.2, 0.8}},
  };
}

const ConvergenceRow& ConvergenceReport::row(const std::string& f_name) const {
  for (const ConvergenceRow& r : rows)
    if (r.f_name == f_name) return r;
  throw std::out_of_range("ConvergenceReport: no row named " + f_name);
}

std::string trend_of(const std::vector<double>& errors) {
  for (std::size_t i = 1; i < errors.size(); ++i)
    if (errors[i] > errors[i - 1] + kTrendFlatTolerance) return kTrendNonMonotone;
  return kTrendDecreasing;
}

ConvergenceReport weak_convergence_report(const std::string& potential, const std::vector<int>& k_list,
                                          const std::vector<DensityOnGrid>& densities, const LimitDensity& limit,
                                          const std::vector<TestFunction>& panel) {
  if (k_list.size() != densities.size())
    throw NumericError(ErrorKind::Domain, "weak_convergence_report: k_list and densities differ in length");
  ConvergenceReport rep;
  rep.potential = potential;
  rep.beta = limit.beta;
  rep.family = "eigenfunction";
  rep.k_list = k_list;
  for (const TestFunction& tf : panel) {
    ConvergenceRow row;
    row.f_name = tf.name;
    const double target = limit_integral(limit, tf.f, tf.breakpoints);
    for (const DensityOnGrid& d : densities) row.errors.push_back(std::abs(integrate(d, tf.f) - target));
    row.trend = trend_of(row.errors);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

double zero_distribution_limit(double beta, double epsilon) {
  require_beta(beta);
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw NumericError(ErrorKind::Domain, "zero_distribution_limit: epsilon must lie in (0, 1]", epsilon);
  if (std::isinf(beta)) return epsilon;
  const double c = std::tgamma(1.5 + 1.0 / beta) / (std::sqrt(kPi) * std::tgamma(1.0 + 1.0 / beta));
  // integral_0^eps (1 - x^beta)^{1/2} dx with x = 1 - tau^2
  auto g = [beta](double tau) { return 2.0 * tau * std::sqrt(one_minus_pow(tau, beta)); };
  const double half = quad::adaptive(g, std::sqrt(1.0 - epsilon), 1.0, tight()).value;
  return 2.0 * c * half;
}

}  // namespace concmeas
