#include "concmeas/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "concmeas/errors.hpp"
#include "concmeas/quadrature.hpp"

namespace concmeas {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw ConfigError(field, "must be positive and finite");
}

double checked_call(const Evaluator& f, double x, const char* what) {
  double y = 0.0;
  try {
    y = f(x);
  } catch (const NumericError&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericError(ErrorKind::Evaluation, std::string(what) + " evaluator failed: " + e.what(), x);
  }
  if (std::isnan(y)) throw NumericError(ErrorKind::Evaluation, std::string(what) + " evaluator returned NaN", x);
  return y;
}

// Derivatives of |x|^p at x > 0.
std::array<double, 4> power_derivs(double p, double x) {
  const double xp = std::pow(x, p);
  return {xp, p * xp / x, p * (p - 1.0) * xp / (x * x), p * (p - 1.0) * (p - 2.0) * xp / (x * x * x)};
}

std::string format_param(const char* label, double value) {
  std::ostringstream os;
  os << label << "=" << value;
  return os.str();
}

}  // namespace

const char* to_string(PotentialKind kind) noexcept {
  switch (kind) {
    case PotentialKind::Monomial: return "monomial";
    case PotentialKind::MonomialLog: return "monomial_log";
    case PotentialKind::Exponential: return "exponential";
    case PotentialKind::Harmonic: return "harmonic";
    case PotentialKind::Custom: return "custom";
  }
  return "unknown";
}

const char* to_string(PerturbationKind kind) noexcept {
  switch (kind) {
    case PerturbationKind::Zero: return "zero";
    case PerturbationKind::CompactL1: return "compact";
    case PerturbationKind::PolyBounded: return "poly";
  }
  return "unknown";
}

PerturbationSpec PerturbationSpec::zero() { return PerturbationSpec{}; }

PerturbationSpec PerturbationSpec::compact_bump(double radius, double amplitude) {
  require_positive(radius, "perturbation.support_radius");
  PerturbationSpec p;
  p.kind = PerturbationKind::CompactL1;
  p.support_radius = radius;
  // integral of exp(1 - 1/(1 - t^2)) over (-1, 1)
  constexpr double kBumpMass = 1.2069003224378762;
  p.l1_bound = std::abs(amplitude) * radius * kBumpMass;
  p.w = [radius, amplitude](double x) {
    const double t = x / radius;
    const double s = 1.0 - t * t;
    return s > 0.0 ? amplitude * std::exp(1.0 - 1.0 / s) : 0.0;
  };
  return p;
}

PerturbationSpec PerturbationSpec::compact_indicator(double radius, double amplitude) {
  require_positive(radius, "perturbation.support_radius");
  PerturbationSpec p;
  p.kind = PerturbationKind::CompactL1;
  p.support_radius = radius;
  p.l1_bound = 2.0 * radius * std::abs(amplitude);
  p.w = [radius, amplitude](double x) { return std::abs(x) <= radius ? amplitude : 0.0; };
  return p;
}

PerturbationSpec PerturbationSpec::poly_bounded(double gamma, double amplitude) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("perturbation.gamma", "must be >= 0");
  PerturbationSpec p;
  p.kind = PerturbationKind::PolyBounded;
  p.gamma = gamma;
  p.bound = std::abs(amplitude);
  p.w = [gamma, amplitude](double x) { return amplitude * std::pow(std::abs(x), gamma); };
  return p;
}

PerturbationSpec PerturbationSpec::custom(Evaluator w, PerturbationKind kind, double support_radius,
                                          double l1_bound, double gamma, double bound) {
  PerturbationSpec p;
  p.kind = kind;
  p.w = std::move(w);
  p.support_radius = support_radius;
  p.l1_bound = l1_bound;
  p.gamma = gamma;
  p.bound = bound;
  return p;
}

PotentialSpec PotentialSpec::harmonic() {
  PotentialSpec s;
  s.kind_ = PotentialKind::Harmonic;
  s.param_ = 2.0;
  s.nu_ = -1.0;
  s.xi0_ = 1.0;
  s.name_ = "harmonic";
  return s;
}

PotentialSpec PotentialSpec::monomial(double beta) {
  require_positive(beta, "potential.beta");
  PotentialSpec s;
  s.kind_ = PotentialKind::Monomial;
  s.param_ = beta;
  s.nu_ = -1.0;
  s.xi0_ = 1.0;
  s.name_ = format_param("monomial:beta", beta);
  return s;
}

PotentialSpec PotentialSpec::monomial_log(double alpha) {
  require_positive(alpha, "potential.alpha");
  PotentialSpec s;
  s.kind_ = PotentialKind::MonomialLog;
  s.param_ = alpha;
  s.nu_ = -1.0;
  s.xi0_ = 1.0;
  s.name_ = format_param("monomial_log:alpha", alpha);
  return s;
}

PotentialSpec PotentialSpec::exponential(double gamma) {
  require_positive(gamma, "potential.gamma");
  PotentialSpec s;
  s.kind_ = PotentialKind::Exponential;
  s.param_ = gamma;
  s.nu_ = gamma - 1.0;
  s.xi0_ = 1.0;
  s.name_ = format_param("exponential:gamma", gamma);
  return s;
}

PotentialSpec PotentialSpec::custom(CustomEvaluators ev, double nu, double xi0,
                                    std::optional<double> beta, std::string name) {
  if (!ev.v || !ev.d1 || !ev.d2 || !ev.d3)
    throw ConfigError("potential.evaluators", "V, V', V'' and V''' evaluators are all required");
  if (!(nu >= -1.0) || !std::isfinite(nu)) throw ConfigError("potential.nu", "must be >= -1");
  require_positive(xi0, "potential.xi0");
  if (beta && !(*beta > 0.0)) throw ConfigError("potential.beta", "must be positive");
  PotentialSpec s;
  s.kind_ = PotentialKind::Custom;
  s.nu_ = nu;
  s.xi0_ = xi0;
  s.declared_beta_ = beta;
  s.custom_ = std::move(ev);
  s.name_ = std::move(name);
  return s;
}

PotentialSpec PotentialSpec::with_perturbation(PerturbationSpec w) const {
  PotentialSpec s = *this;
  s.perturbation_ = std::move(w);
  return s;
}

PotentialSpec PotentialSpec::with_xi0(double xi0) const {
  require_positive(xi0, "potential.xi0");
  PotentialSpec s = *this;
  s.xi0_ = xi0;
  return s;
}

double PotentialSpec::V(double x) const {
  const double ax = std::abs(x);
  switch (kind_) {
    case PotentialKind::Harmonic: return ax * ax;
    case PotentialKind::Monomial: return std::pow(ax, param_);
    case PotentialKind::MonomialLog: return std::pow(ax, param_) * std::log1p(ax * ax);
    case PotentialKind::Exponential: return std::exp(std::pow(ax, param_));
    case PotentialKind::Custom: return checked_call(custom_.v, ax, "V");
  }
  return 0.0;
}

Derivatives PotentialSpec::derivatives(double x) const {
  const double ax = std::abs(x);
  const double sgn = x < 0.0 ? -1.0 : 1.0;
  Derivatives d;
  switch (kind_) {
    case PotentialKind::Harmonic:
      d = {ax * ax, 2.0 * ax, 2.0, 0.0};
      break;
    case PotentialKind::Monomial: {
      const auto p = power_derivs(param_, ax);
      d = {p[0], p[1], p[2], p[3]};
      break;
    }
    case PotentialKind::MonomialLog: {
      const auto p = power_derivs(param_, ax);
      const double q = 1.0 + ax * ax;
      const double l0 = std::log1p(ax * ax);
      const double l1 = 2.0 * ax / q;
      const double l2 = 2.0 * (1.0 - ax * ax) / (q * q);
      const double l3 = 4.0 * ax * (ax * ax - 3.0) / (q * q * q);
      d.v = p[0] * l0;
      d.d1 = p[1] * l0 + p[0] * l1;
      d.d2 = p[2] * l0 + 2.0 * p[1] * l1 + p[0] * l2;
      d.d3 = p[3] * l0 + 3.0 * p[2] * l1 + 3.0 * p[1] * l2 + p[0] * l3;
      break;
    }
    case PotentialKind::Exponential: {
      const auto g = power_derivs(param_, ax);
      const double e = std::exp(g[0]);
      d.v = e;
      d.d1 = e * g[1];
      d.d2 = e * (g[2] + g[1] * g[1]);
      d.d3 = e * (g[3] + 3.0 * g[1] * g[2] + g[1] * g[1] * g[1]);
      break;
    }
    case PotentialKind::Custom:
      d.v = checked_call(custom_.v, ax, "V");
      d.d1 = checked_call(custom_.d1, ax, "V'");
      d.d2 = checked_call(custom_.d2, ax, "V''");
      d.d3 = checked_call(custom_.d3, ax, "V'''");
      break;
  }
  d.d1 *= sgn;
  d.d3 *= sgn;
  return d;
}

double eval_V(const PotentialSpec& spec, double x) { return spec.V(x); }

std::vector<double> regular_variation_estimate(const PotentialSpec& spec, double x,
                                               const std::vector<double>& t_grid) {
  if (!(x > 0.0 && x < 1.0)) throw NumericError(ErrorKind::Domain, "regular_variation_estimate: x must lie in (0, 1)", x);
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t * x > spec.xi0()))
      throw NumericError(ErrorKind::Domain, "regular_variation_estimate: t must exceed xi0 / x", t);
    const double vt = spec.V(t);
    if (vt == 0.0) throw NumericError(ErrorKind::Evaluation, "regular_variation_estimate: V(t) = 0", t);
    out.push_back(spec.V(x * t) / vt);
  }
  return out;
}

BetaFit fit_beta(const PotentialSpec& spec) {
  static constexpr std::array<double, 4> kT = {1e3, 1e4, 1e5, 1e6};
  std::vector<double> lx, lr;
  for (int i = 1; i <= 9; ++i) {
    const double x = 0.1 * i;
    for (double t : kT) {
      const double r = spec.V(x * t) / spec.V(t);
      if (!(r > 0.0) || !std::isfinite(r))
        throw NumericError(ErrorKind::NotRegularlyVarying, "fit_beta: V(xt)/V(t) is not a finite positive number", t);
      lx.push_back(std::log(x));
      lr.push_back(std::log(r));
    }
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += lx[i] * lr[i];
    sxx += lx[i] * lx[i];
  }
  BetaFit fit;
  fit.beta = sxy / sxx;
  for (std::size_t i = 0; i < lx.size(); ++i)
    fit.max_residual = std::max(fit.max_residual, std::abs(lr[i] - fit.beta * lx[i]));
  return fit;
}

double infer_beta(const PotentialSpec& spec) {
  switch (spec.kind()) {
    case PotentialKind::Harmonic: return 2.0;
    case PotentialKind::Monomial:
    case PotentialKind::MonomialLog: return spec.parameter();
    case PotentialKind::Exponential: return kInf;
    case PotentialKind::Custom: break;
  }
  if (spec.declared_beta()) return *spec.declared_beta();
  if (spec.nu() > -1.0) return kInf;
  const BetaFit fit = fit_beta(spec);
  if (!(fit.max_residual < 1e-3) || !(fit.beta > 0.0))
    throw NumericError(ErrorKind::NotRegularlyVarying, "infer_beta: log-ratio regression residual above 1e-3",
                       fit.max_residual);
  return fit.beta;
}

const AssumptionCheck* AssumptionReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double finite_range_limit(const PotentialSpec& spec) {
  constexpr double kCap = 1e300;
  constexpr double kXCap = 1e200;
  auto ok = [&](double x) {
    const double v = spec.V(x);
    return std::isfinite(v) && v < kCap;
  };
  double lo = std::max(1.0, spec.xi0());
  if (!ok(lo)) return lo;
  while (lo < kXCap && ok(2.0 * lo)) lo *= 2.0;
  if (lo >= kXCap) return kXCap;
  double hi = 2.0 * lo;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

namespace {

struct TailResult {
  double value = 0.0;
  bool converged = false;
};

// Integral of g on (a, X) with X doubled until the relative increment drops
// below 1e-8, or until V stops being representable.
template <class G>
TailResult doubling_tail(G&& g, double a, double x_limit) {
  quad::Options opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-300;
  TailResult out;
  double lo = a;
  double hi = 2.0 * a;
  for (int i = 0; i < 400; ++i) {
    if (hi > x_limit) hi = x_limit;
    const quad::Result r = quad::adaptive(g, lo, hi, opt);
    out.value += r.value;
    if (std::abs(r.value) <= 1e-8 * std::abs(out.value) || (out.value == 0.0 && r.value == 0.0)) {
      out.converged = i > 0 || out.value == 0.0;
      if (out.converged) return out;
    }
    if (hi >= x_limit) return out;
    lo = hi;
    hi *= 2.0;
  }
  return out;
}

}  // namespace

AssumptionReport check_assumptions(const PotentialSpec& spec, int sample_budget) {
  if (sample_budget < 100) throw ConfigError("sample_budget", "must be at least 100");
  AssumptionReport rep;
  const double xi0 = spec.xi0();
  const double nu = spec.nu();
  const double x_limit = finite_range_limit(spec);
  const double x_hi = std::min(x_limit, std::max(1e6, 100.0 * xi0));

  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(sample_budget));
  const double ratio = std::pow(x_hi / xi0, 1.0 / (sample_budget - 1));
  for (int i = 0; i < sample_budget; ++i) xs.push_back(xi0 * std::pow(ratio, i));

  auto add = [&](std::string name, bool passed, double value, std::string detail) {
    rep.checks.push_back({std::move(name), passed, value, std::move(detail)});
  };

  try {
    double asym = 0.0;
    bool even = true;
    for (double x : xs) {
      for (double y : {0.5 * x, x}) {
        if (spec.V(y) != spec.V(-y)) even = false;
        if (spec.W(y) != spec.W(-y)) even = false;
        asym = std::max(asym, std::abs(spec.V(y) - spec.V(-y)));
      }
    }
    add("evenness", even, asym, even ? "V and W agree at x and -x" : "V or W differs between x and -x");

    bool positive = true;
    bool increasing = true;
    double min_v1 = kInf;
    double prev = -kInf;
    double rmin = kInf, rmax = 0.0, r2 = 0.0, r3 = 0.0;
    for (double x : xs) {
      const Derivatives d = spec.derivatives(x);
      if (!std::isfinite(d.v) || !std::isfinite(d.d1)) continue;
      if (!(d.v > 0.0) || !(d.d1 > 0.0)) positive = false;
      if (!(d.v > prev)) increasing = false;
      prev = d.v;
      min_v1 = std::min(min_v1, d.d1);
      const double xnu = std::pow(x, nu);
      const double r = d.d1 / (d.v * xnu);
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
      if (std::isfinite(d.d2)) r2 = std::max(r2, std::abs(d.d2) / (d.d1 * xnu));
      if (std::isfinite(d.d3)) r3 = std::max(r3, std::abs(d.d3) / (d.d1 * xnu * xnu));
    }
    add("positivity", positive, min_v1, "V > 0 and V' > 0 for sampled x >= xi0");
    add("monotone_growth", increasing, prev, "V strictly increasing on samples past xi0");
    rep.growth_ratio_min = rmin;
    rep.growth_ratio_max = rmax;
    const bool ratio_ok = rmin > 0.0 && std::isfinite(rmax) && rmax > 0.0;
    add("growth_ratio", ratio_ok, rmax / rmin, "V'/(V x^nu) within a finite positive bracket");
    add("second_derivative_bound", std::isfinite(r2), r2, "|V''| <= C V' x^nu on samples");
    add("third_derivative_bound", std::isfinite(r3), r3, "|V'''| <= C V' x^(2 nu) on samples");

    auto g1 = [&](double t) {
      const Derivatives d = spec.derivatives(t);
      if (!std::isfinite(d.v) || d.v > 1e300) return 0.0;
      return d.d1 * d.d1 / std::pow(d.v, 2.5);
    };
    auto g2 = [&](double t) {
      const Derivatives d = spec.derivatives(t);
      if (!std::isfinite(d.v) || d.v > 1e300) return 0.0;
      return std::abs(d.d2) / std::pow(d.v, 1.5);
    };
    const TailResult t1 = doubling_tail(g1, xi0, x_limit);
    const TailResult t2 = doubling_tail(g2, xi0, x_limit);
    rep.tail_v1 = t1.value;
    rep.tail_v2 = t2.value;
    add("tail_integral_v1", t1.converged && std::isfinite(t1.value), t1.value,
        "integral of V'^2/V^(5/2) on (xi0, X) settles under doubling of X");
    add("tail_integral_v2", t2.converged && std::isfinite(t2.value), t2.value,
        "integral of |V''|/V^(3/2) on (xi0, X) settles under doubling of X");

    // Envelopes: log V / log x (nu = -1) or log V / x^(nu+1) in a positive bracket.
    double emin = kInf, emax = 0.0;
    for (std::size_t i = xs.size() / 2; i < xs.size(); ++i) {
      const double x = xs[i];
      if (x <= std::exp(1.0)) continue;
      const double v = spec.V(x);
      if (!std::isfinite(v) || v <= 1.0) continue;
      const double e = (nu > -1.0) ? std::log(v) / std::pow(x, nu + 1.0) : std::log(v) / std::log(x);
      emin = std::min(emin, e);
      emax = std::max(emax, e);
    }
    const bool env_ok = emin > 0.0 && std::isfinite(emax) && emax > 0.0;
    add("growth_envelope", env_ok, env_ok ? emax / emin : 0.0,
        nu > -1.0 ? "log V / x^(nu+1) bounded above and below" : "log V / log x bounded above and below");

    if (spec.has_perturbation() && spec.perturbation()->kind == PerturbationKind::CompactL1) {
      const double radius = spec.perturbation()->support_radius;
      bool vanishes = true;
      for (double x : xs)
        if (x > radius && spec.W(x) != 0.0) vanishes = false;
      add("perturbation_support", vanishes, radius, "W vanishes outside the declared support");
    }
  } catch (const NumericError& e) {
    add("evaluation", false, e.value(), e.what());
  }

  rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.passed; });
  return rep;
}

double admissibility_JW(const PotentialSpec& spec, const Evaluator& w1, std::vector<double> breakpoints) {
  if (!spec.has_perturbation()) return 0.0;
  const PerturbationSpec& pert = *spec.perturbation();
  auto integrand = [&](double s) {
    const double w = w1(s);
    if (!std::isfinite(w)) return 0.0;
    return pert(s) / (w * w);
  };
  breakpoints.push_back(0.0);
  if (pert.kind == PerturbationKind::CompactL1) breakpoints.push_back(pert.support_radius);
  std::erase_if(breakpoints, [](double b) { return !(b >= 0.0) || !std::isfinite(b); });
  std::sort(breakpoints.begin(), breakpoints.end());

  quad::Options opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-14;
  const quad::Result body = quad::piecewise(integrand, breakpoints, opt);
  if (!body.converged)
    throw NumericError(ErrorKind::NonConvergence, "admissibility_JW: quadrature did not converge", body.value);

  const double last = breakpoints.back();
  if (pert.kind == PerturbationKind::CompactL1 && last >= pert.support_radius) return body.value;

  quad::TailOptions tail;
  tail.segment = opt;
  tail.abs_tol = 1e-12;
  tail.rel_tol = 0.0;
  tail.max_segments = 400;
  const quad::Result rest = quad::to_infinity(integrand, last, std::max(1.0, last), tail);
  if (!rest.converged)
    throw NumericError(ErrorKind::NonConvergence, "admissibility_JW: tail did not converge", body.value + rest.value);
  return body.value + rest.value;
}

}  // namespace concmeas
