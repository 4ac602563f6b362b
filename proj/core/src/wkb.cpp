#include "concmeas/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "concmeas/eigensolver.hpp"
#include "concmeas/errors.hpp"
#include "concmeas/quadrature.hpp"
#include "concmeas/special.hpp"

namespace concmeas {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAiryRegion = 2.0;  // |eta| below which the Airy form is used
constexpr double kMaxScale = 700.0;
constexpr int kOscPanels = 64;

quad::Options phase_options() {
  quad::Options opt;
  opt.rel_tol = 1e-14;
  opt.abs_tol = 1e-16;
  opt.max_intervals = 2000;
  return opt;
}

}  // namespace

PhaseContext::PhaseContext(PotentialSpec spec, double lambda) : spec_(std::move(spec)) {
  td_.lambda = lambda;
  td_.x_lambda = turning_point(spec_, lambda);
  const Derivatives d = spec_.derivatives(td_.x_lambda);
  td_.a_lambda = d.d1;
  if (!(td_.a_lambda > 0.0))
    throw NumericError(ErrorKind::Geometry, "PhaseContext: V'(x_lambda) must be positive", td_.a_lambda);
  v2_turn_ = d.d2;
  v3_turn_ = d.d3;
  const double a = td_.a_lambda;
  k_turn_ = v3_turn_ / (14.0 * a) - 9.0 * v2_turn_ * v2_turn_ / (140.0 * a * a);

  const double xl = td_.x_lambda;
  const quad::Options opt = phase_options();

  auto g_osc = [this, xl](double tau) {
    const double diff = td_.lambda - spec_.V(xl - tau * tau);
    return 2.0 * tau * std::sqrt(std::max(diff, 0.0));
  };
  auto g_forb = [this, xl](double tau) {
    const double diff = spec_.V(xl + tau * tau) - td_.lambda;
    return 2.0 * tau * std::sqrt(std::max(diff, 0.0));
  };

  const double t_end = std::sqrt(xl);
  osc_.tau.push_back(0.0);
  osc_.cum.push_back(0.0);
  for (int j = 1; j <= kOscPanels; ++j) {
    const double hi = (j == kOscPanels) ? t_end : t_end * j / kOscPanels;
    const quad::Result r = quad::adaptive(g_osc, osc_.tau.back(), hi, opt);
    osc_.tau.push_back(hi);
    osc_.cum.push_back(osc_.cum.back() + r.value);
  }

  const double width = linear_width_estimate(a);
  const double step = 0.5 * std::sqrt(width);
  forb_.tau.push_back(0.0);
  forb_.cum.push_back(0.0);
  double tau = 0.0;
  double inc = step;
  for (int j = 0; j < 400 && forb_.cum.back() < 2.0 * kMaxScale; ++j) {
    if (j >= 16) inc *= 1.5;
    const double hi = tau + inc;
    const double v = spec_.V(xl + hi * hi);
    if (!std::isfinite(v) || v > 1e300) break;
    const quad::Result r = quad::adaptive(g_forb, tau, hi, opt);
    forb_.tau.push_back(hi);
    forb_.cum.push_back(forb_.cum.back() + r.value);
    tau = hi;
  }

  series_radius_ = width / 100.0;
  k_blend_radius_ = width / 10.0;
  try {
    const TransitionWidths w = transition_widths(spec_, lambda, [this](double x) { return zeta(x).magnitude; });
    td_.delta = w.delta;
    td_.delta1 = w.delta1;
    has_widths_ = true;
    series_radius_ = w.delta / 100.0;
    k_blend_radius_ = w.delta / 10.0;
  } catch (const NumericError& e) {
    if (e.kind() != ErrorKind::Geometry) throw;
    td_.delta = kNaN;
    td_.delta1 = kNaN;
  }
  td_.kappa_lambda = kappa_from(spec_, xl);
}

double PhaseContext::zeta_series(double t) const {
  const double s = std::abs(t);
  const double a = td_.a_lambda;
  const double corr = (t < 0.0 ? -1.0 : 1.0) * 0.15 * (v2_turn_ / a) * s;
  return (2.0 / 3.0) * std::sqrt(a) * std::pow(s, 1.5) * (1.0 + corr);
}

double PhaseContext::zeta_by_quadrature(double t) const {
  const double xl = td_.x_lambda;
  const bool osc = t < 0.0;
  const Anchors& an = osc ? osc_ : forb_;
  const double tau = std::sqrt(std::abs(t));
  auto g = [this, xl, osc](double s) {
    const double diff = osc ? td_.lambda - spec_.V(xl - s * s) : spec_.V(xl + s * s) - td_.lambda;
    return 2.0 * s * std::sqrt(std::max(diff, 0.0));
  };
  auto it = std::upper_bound(an.tau.begin(), an.tau.end(), tau);
  const std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - an.tau.begin()) - 1));
  const double base = an.cum[j];
  if (tau == an.tau[j]) return base;
  return base + quad::adaptive(g, an.tau[j], tau, phase_options()).value;
}

Phase PhaseContext::zeta(double x) const {
  if (!(x >= 0.0)) throw NumericError(ErrorKind::Domain, "zeta: x must be non-negative", x);
  const double t = x - td_.x_lambda;
  Phase p;
  p.side = t <= 0.0 ? Side::Oscillatory : Side::Forbidden;
  if (t == 0.0) return p;
  p.magnitude = std::abs(t) < series_radius_ ? zeta_series(t) : zeta_by_quadrature(t);
  return p;
}

void PhaseContext::require_widths(const char* who) const {
  if (!has_widths_)
    throw NumericError(ErrorKind::Geometry,
                       std::string(who) + ": transition widths unavailable, lambda too small", td_.lambda);
}

double PhaseContext::w1(double x) const {
  require_widths("w1");
  const double t = x - td_.x_lambda;
  if (t >= -td_.delta && t <= td_.delta1) return std::pow(td_.a_lambda, 1.0 / 6.0);
  return std::pow(std::abs(td_.lambda - spec_.V(x)), 0.25);
}

double PhaseContext::log_w2(double x) const {
  require_widths("w2");
  if (x <= td_.x_lambda + td_.delta1) return 0.0;
  return zeta(x).magnitude;
}

double PhaseContext::w2(double x) const { return std::exp(log_w2(x)); }

ModelSolutionSample PhaseContext::model_solutions(double x) const {
  if (!(x >= 0.0)) throw NumericError(ErrorKind::Domain, "model_solutions: x must be non-negative", x);
  ModelSolutionSample m;
  m.x = x;
  const double t = x - td_.x_lambda;
  const double a = td_.a_lambda;
  const double a13 = std::cbrt(a);

  double zabs = 0.0;
  double eta = 0.0;
  double eta_p = 0.0;
  if (std::abs(t) < series_radius_) {
    eta = a13 * t * (1.0 + v2_turn_ * t / (10.0 * a));
    eta_p = a13 * (1.0 + v2_turn_ * t / (5.0 * a));
    zabs = (2.0 / 3.0) * std::pow(std::abs(eta), 1.5);
  } else {
    zabs = zeta_by_quadrature(t);
    eta = std::copysign(std::pow(1.5 * zabs, 2.0 / 3.0), t);
  }
  const double lv = td_.lambda - spec_.V(x);
  const bool forbidden = t > 0.0;
  m.log_scale = forbidden ? zabs : 0.0;

  if (std::abs(eta) <= kAiryRegion) {
    if (eta_p == 0.0) eta_p = std::sqrt(std::abs(lv)) / std::sqrt(std::abs(eta));
    const special::AiryParts ap = special::airy_parts(eta);
    const double amp = 1.0 / std::sqrt(eta_p);
    const double ai = special::kAiry0 * ap.f - special::kAiryP0 * ap.g;
    m.u = kPi * std::sqrt(2.0) * amp * ai;
    m.v = std::sqrt(6.0) * special::kAiryP0 * ap.g * amp;
    m.u_mantissa = m.u * std::exp(m.log_scale);
    m.v_mantissa = m.v * std::exp(-m.log_scale);
  } else {
    const double babs = std::sqrt(zabs / std::sqrt(std::abs(lv)));
    if (!forbidden) {
      const special::BesselJY jy = special::bessel_jy(1.0 / 3.0, zabs);
      const double jm = 0.5 * jy.j - 0.5 * std::sqrt(3.0) * jy.y;
      m.u = kPi / std::sqrt(3.0) * babs * (jy.j + jm);
      m.v = -babs * jy.j;
      m.u_mantissa = m.u;
      m.v_mantissa = m.v;
    } else {
      const special::BesselIKScaled ik = special::bessel_ik_scaled(1.0 / 3.0, zabs);
      m.u_mantissa = babs * ik.k;
      m.v_mantissa = babs * ik.i;
      m.u = zabs > kMaxScale ? 0.0 : m.u_mantissa * std::exp(-zabs);
      m.v_overflow = zabs > kMaxScale;
      m.v = m.v_overflow ? std::copysign(kInf, m.v_mantissa) : m.v_mantissa * std::exp(zabs);
    }
  }

  if (has_widths_) {
    m.w1 = (t >= -td_.delta && t <= td_.delta1) ? std::pow(a, 1.0 / 6.0) : std::pow(std::abs(lv), 0.25);
    const double lw2 = (t > td_.delta1) ? zabs : 0.0;
    m.w2 = lw2 > kMaxScale ? kInf : std::exp(lw2);
  } else {
    m.w1 = kNaN;
    m.w2 = kNaN;
  }
  return m;
}

double PhaseContext::K_direct(double x, double zeta_abs) const {
  const Derivatives d = spec_.derivatives(x);
  const double lv = td_.lambda - d.v;
  const double r1 = d.d1 / lv;
  return 0.25 * ((5.0 / 9.0) * (std::abs(lv) / zeta_abs) / zeta_abs - d.d2 / lv - 1.25 * r1 * r1);
}

double PhaseContext::error_potential_K(double x) const {
  const double t = x - td_.x_lambda;
  if (std::abs(t) >= k_blend_radius_) return K_direct(x, zeta(x).magnitude);
  const double edge = td_.x_lambda + std::copysign(k_blend_radius_, t == 0.0 ? 1.0 : t);
  const double k_edge = K_direct(edge, zeta(edge).magnitude);
  return k_turn_ + (k_edge - k_turn_) * std::abs(t) / k_blend_radius_;
}

std::vector<double> PhaseContext::turning_breakpoints() const {
  require_widths("turning_breakpoints");
  std::vector<double> pts = {0.0, td_.x_lambda - td_.delta, td_.x_lambda, td_.x_lambda + td_.delta1};
  std::erase_if(pts, [](double p) { return p < 0.0; });
  return pts;
}

Phase zeta(const PhaseContext& ctx, double x) { return ctx.zeta(x); }

ModelSolutionSample model_solutions(const PhaseContext& ctx, double x) { return ctx.model_solutions(x); }

double error_potential_K(const PhaseContext& ctx, double x) { return ctx.error_potential_K(x); }

namespace {

bool potential_overflows(const PotentialSpec& spec, double x) {
  const double v = spec.V(x);
  return !std::isfinite(v) || v > 1e300;
}

}  // namespace

double JK_integral(const PhaseContext& ctx) {
  const TurningData& td = ctx.turning();
  if (!ctx.has_widths())
    throw NumericError(ErrorKind::Geometry, "JK_integral: transition widths unavailable", td.lambda);
  const double xl = td.x_lambda;
  const double half = 0.5 * std::pow(xl, -ctx.spec().nu());
  const double dp = std::min(half, xl);
  const double dpp = half;
  const double blend = td.delta / 10.0;

  auto integrand = [&ctx](double s) {
    const double w = ctx.w1(s);
    return std::abs(ctx.error_potential_K(s)) / (w * w);
  };

  std::vector<double> pts = {0.0, xl - dp, xl - td.delta, xl - blend, xl, xl + blend, xl + td.delta1, xl + dpp};
  if (ctx.spec().xi0() < xl) pts.push_back(ctx.spec().xi0());
  std::erase_if(pts, [](double p) { return p < 0.0; });
  std::sort(pts.begin(), pts.end());

  quad::Options opt;
  opt.rel_tol = 1e-9;
  opt.abs_tol = 1e-11;
  opt.max_intervals = 4000;
  const quad::Result body = quad::piecewise(integrand, pts, opt);
  if (!body.converged)
    throw NumericError(ErrorKind::NonConvergence, "JK_integral: quadrature budget exhausted", body.value);

  quad::TailOptions tail;
  tail.segment = opt;
  tail.abs_tol = 1e-12;
  tail.rel_tol = 0.0;
  tail.max_segments = 400;
  const double start = pts.back();
  const quad::Result rest = quad::to_infinity(integrand, start, std::max(start, 1.0) * 0.5, tail,
                                              [&ctx](double x) { return potential_overflows(ctx.spec(), x); });
  if (!rest.converged)
    throw NumericError(ErrorKind::NonConvergence, "JK_integral: tail did not converge", body.value + rest.value);
  return body.value + rest.value;
}

double JW_integral(const PhaseContext& ctx) {
  if (!ctx.spec().has_perturbation()) return 0.0;
  return admissibility_JW(ctx.spec(), [&ctx](double x) { return ctx.w1(x); }, ctx.turning_breakpoints());
}

UNorm u_norm_integral(const PhaseContext& ctx) {
  const TurningData& td = ctx.turning();
  const double xl = td.x_lambda;
  UNorm out;

  auto u2 = [&ctx](double x) {
    const double u = ctx.model_solutions(x).u;
    return u * u;
  };
  quad::Options opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-14;
  opt.max_intervals = 20000;
  std::vector<double> pts = {0.0, xl};
  if (ctx.has_widths()) pts = ctx.turning_breakpoints();
  const quad::Result body = quad::piecewise(u2, pts, opt);
  quad::TailOptions tail;
  tail.segment = opt;
  tail.abs_tol = 1e-16;
  tail.rel_tol = 0.0;
  const double start = pts.back();
  const double first = ctx.has_widths() ? std::max(td.delta1, 1e-3) : std::max(0.1 * xl, 1e-3);
  const quad::Result rest = quad::to_infinity(u2, start, first, tail, [&ctx](double x) {
    return potential_overflows(ctx.spec(), x) || ctx.zeta(x).magnitude > kMaxScale;
  });
  if (!body.converged || !rest.converged)
    throw NumericError(ErrorKind::NonConvergence, "u_norm_integral: quadrature budget exhausted",
                       body.value + rest.value);
  out.norm_sq = body.value + rest.value;

  const PotentialSpec& spec = ctx.spec();
  const double lambda = td.lambda;
  const double a = td.a_lambda;
  auto g = [&](double tau) {
    if (tau == 0.0) return 2.0 / std::sqrt(a);
    const double diff = lambda - spec.V(xl - tau * tau);
    return diff > 0.0 ? 2.0 * tau / std::sqrt(diff) : 2.0 / std::sqrt(a);
  };
  quad::Options lopt;
  lopt.rel_tol = 1e-12;
  lopt.abs_tol = 1e-15;
  out.leading = kPi * quad::adaptive(g, 0.0, std::sqrt(xl), lopt).value;
  out.relative_correction = out.norm_sq / out.leading - 1.0;
  return out;
}

namespace {

double assemble_green(const ModelSolutionSample& mx, const ModelSolutionSample& ms, double extra) {
  const double e1 = ms.log_scale - mx.log_scale + extra;
  const double e2 = mx.log_scale - ms.log_scale + extra;
  const double t1 = mx.u_mantissa * ms.v_mantissa;
  const double t2 = mx.v_mantissa * ms.u_mantissa;
  auto scaled = [](double m, double e) { return m == 0.0 ? 0.0 : m * std::exp(e); };
  return scaled(t1, e1) - scaled(t2, e2);
}

}  // namespace

double green_kernel(const PhaseContext& ctx, double x, double s) {
  return assemble_green(ctx.model_solutions(x), ctx.model_solutions(s), 0.0);
}

double green_kernel_weighted(const PhaseContext& ctx, double x, double s) {
  const ModelSolutionSample mx = ctx.model_solutions(x);
  const ModelSolutionSample ms = ctx.model_solutions(s);
  const double extra = ctx.log_w2(x) - ctx.log_w2(s);
  return assemble_green(mx, ms, extra) * mx.w1 * ms.w1;
}

double envelope_constant(double jk, double jw) {
  const double j = jk + jw;
  if (!(j < 1.0)) throw NumericError(ErrorKind::AsymptoticRegime, "asymptotic regime not reached: J_K + J_W >= 1", j);
  return j / (1.0 - j);
}

AsymptoticEnvelope asymptotic_envelope(const PhaseContext& ctx, double jw, double jk) {
  AsymptoticEnvelope env;
  env.constant = envelope_constant(jk, jw);
  const double c = env.constant;
  env.bound = [ctx, c](double x) {
    if (c == 0.0) return 0.0;
    return c * std::exp(-ctx.log_w2(x)) / ctx.w1(x);
  };
  return env;
}

double envelope_residual_sup(const PhaseContext& ctx, const Eigenpair& pair, double zeta_stop) {
  if (!(zeta_stop > 0.0)) throw NumericError(ErrorKind::Domain, "envelope_residual_sup: zeta_stop must be positive", zeta_stop);
  const double xl = ctx.turning().x_lambda;
  double x_end = xl;
  const double step = 0.01 * xl;
  while (!(x_end > xl && ctx.zeta_magnitude(x_end) >= zeta_stop)) {
    x_end += step;
    if (x_end > pair.x_max)
      throw NumericError(ErrorKind::Domain, "envelope_residual_sup: grid ends before the requested phase", zeta_stop);
  }
  std::vector<double> xs, us, ps;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pair.psi.size(); ++i) {
    const double x = pair.x(i);
    if (x > x_end) break;
    const double u = ctx.model_solutions(x).u;
    xs.push_back(x);
    us.push_back(u);
    ps.push_back(pair.psi[i]);
    if (x < xl) {
      num += u * pair.psi[i];
      den += pair.psi[i] * pair.psi[i];
    }
  }
  const double c = num / den;
  double sup = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) sup = std::max(sup, std::abs(c * ps[i] - us[i]) * ctx.w1(xs[i]) * ctx.w2(xs[i]));
  return sup;
}

}  // namespace concmeas
