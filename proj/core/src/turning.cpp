#include "concmeas/turning.hpp"

#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>

#include "concmeas/errors.hpp"
#include "concmeas/quadrature.hpp"

namespace concmeas {

namespace {

template <class F>
double bracketed_root(F&& f, double lo, double hi, double f_lo, double f_hi) {
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-16 * std::max(std::abs(a), std::abs(b)); };
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

double turning_point(const PotentialSpec& spec, double lambda) {
  if (!std::isfinite(lambda)) throw NumericError(ErrorKind::Domain, "turning_point: lambda must be finite", lambda);
  const double lo0 = spec.monotone_on_half_line() ? 0.0 : spec.xi0();
  const double v_lo = spec.V(lo0);
  if (!(lambda > v_lo))
    throw NumericError(ErrorKind::BelowWellRange, "turning_point: energy below single-well range", lambda);

  double lo = lo0;
  double hi = std::max(2.0 * lo0, 1.0);
  double v_hi = spec.V(hi);
  int grow = 0;
  while (!(v_hi >= lambda)) {
    lo = hi;
    hi *= 2.0;
    v_hi = spec.V(hi);
    if (++grow > 2000 || !std::isfinite(hi))
      throw NumericError(ErrorKind::Geometry, "turning_point: V stays below lambda on the search range", lambda);
  }
  // bisect in x while V is finite, then polish
  auto g = [&](double x) { return spec.V(x) - lambda; };
  double g_lo = g(lo);
  double g_hi = v_hi - lambda;
  if (!std::isfinite(g_hi)) {
    while (!std::isfinite(g_hi) && hi - lo > 1e-15 * hi) {
      const double mid = 0.5 * (lo + hi);
      const double gm = g(mid);
      if (gm < 0.0) {
        lo = mid;
        g_lo = gm;
      } else {
        hi = mid;
        g_hi = gm;
      }
    }
  }
  if (g_hi == 0.0) return hi;
  double x = bracketed_root(g, lo, hi, g_lo, g_hi);
  for (int i = 0; i < 3; ++i) {
    const Derivatives d = spec.derivatives(x);
    if (!(d.d1 > 0.0)) break;
    const double step = (d.v - lambda) / d.d1;
    const double nx = x - step;
    if (!(nx > lo0) || !std::isfinite(nx)) break;
    if (std::abs(spec.V(nx) - lambda) > std::abs(d.v - lambda)) break;
    x = nx;
  }
  const double rel = std::abs(spec.V(x) - lambda) / lambda;
  if (rel > 1e-12)
    throw NumericError(ErrorKind::NonConvergence, "turning_point: residual above 1e-12 relative", rel);
  return x;
}

double linear_width_estimate(double a_lambda) { return std::pow(1.5 / std::sqrt(a_lambda), 2.0 / 3.0); }

TransitionWidths transition_widths(const PotentialSpec& spec, double lambda, const PhaseMagnitude& zeta) {
  const double xl = turning_point(spec, lambda);
  const double a = spec.derivatives(xl).d1;
  TransitionWidths w;

  const double z0 = zeta(0.0);
  if (!(z0 > 1.0))
    throw NumericError(ErrorKind::Geometry, "transition_widths: oscillatory phase below 1, lambda too small", z0);
  auto g_left = [&](double d) { return zeta(xl - d) - 1.0; };
  w.delta = bracketed_root(g_left, 0.0, xl, -1.0, z0 - 1.0);

  auto g_right = [&](double d) { return zeta(xl + d) - 1.0; };
  double lo = 0.0;
  double hi = std::min(linear_width_estimate(a), xl);
  double g_hi = g_right(hi);
  int grow = 0;
  while (!(g_hi >= 0.0)) {
    lo = hi;
    hi *= 2.0;
    g_hi = g_right(hi);
    if (++grow > 200) throw NumericError(ErrorKind::Geometry, "transition_widths: delta1 not bracketed", lambda);
  }
  w.delta1 = bracketed_root(g_right, lo, hi, g_right(lo), g_hi);
  return w;
}

double kappa_from(const PotentialSpec& spec, double x_lambda) {
  auto integrand = [&](double t) {
    const Derivatives d = spec.derivatives(t);
    if (!std::isfinite(d.v) || d.v > 1e300) return 0.0;
    return std::abs(d.d2) / std::pow(d.v, 1.5) + d.d1 * d.d1 / std::pow(d.v, 2.5);
  };
  quad::TailOptions opt;
  opt.segment.rel_tol = 1e-12;
  opt.segment.abs_tol = 0.0;
  opt.abs_tol = 0.0;
  opt.rel_tol = 1e-8;
  opt.max_segments = 400;
  auto overflow = [&](double x) {
    const double v = spec.V(x);
    return !std::isfinite(v) || v > 1e300;
  };
  const quad::Result r = quad::to_infinity(integrand, x_lambda, std::max(x_lambda, 1e-3), opt, overflow);
  if (!r.converged) throw NumericError(ErrorKind::NonConvergence, "kappa: tail integral did not settle", r.value);
  return r.value;
}

double kappa(const PotentialSpec& spec, double lambda) { return kappa_from(spec, turning_point(spec, lambda)); }

double lambda_min_asymptotic(const PotentialSpec& spec, double kappa_target) {
  const double v0 = spec.V(spec.monotone_on_half_line() ? 0.0 : spec.xi0());
  double lo = std::max(v0, 0.0) + 1.0;
  if (kappa(spec, lo) < kappa_target) return lo;
  double hi = 2.0 * lo;
  while (!(kappa(spec, hi) < kappa_target)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericError(ErrorKind::NonConvergence, "lambda_min_asymptotic: kappa does not decay", lo);
  }
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    (kappa(spec, mid) < kappa_target ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace concmeas
