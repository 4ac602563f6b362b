#pragma once

/// Even single-well potentials Q = V + W on the real line.
///
/// V is one of a few analytic families or a user-supplied set of derivative
/// evaluators; W is an optional even, locally integrable perturbation. The
/// structural conditions (positivity and monotonicity past xi0, integrability
/// of V'^2 / V^{5/2} and |V''| / V^{3/2}, the growth law V' ~ V x^nu) are
/// verified on samples by check_assumptions rather than assumed.

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace concmeas {

using Evaluator = std::function<double(double)>;

enum class PotentialKind { Monomial, MonomialLog, Exponential, Harmonic, Custom };

const char* to_string(PotentialKind kind) noexcept;

/// V and its first three derivatives at one point.
struct Derivatives {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Evaluators for a custom V. Each is called with x > 0 only; evenness is
/// applied by PotentialSpec.
struct CustomEvaluators {
  Evaluator v, d1, d2, d3;
};

enum class PerturbationKind { Zero, CompactL1, PolyBounded };

const char* to_string(PerturbationKind kind) noexcept;

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::Zero;
  Evaluator w;                  ///< even; called for any real x
  double support_radius = 0.0;  ///< CompactL1: W = 0 outside [-R, R]
  double l1_bound = 0.0;        ///< CompactL1: bound on ||W||_1
  double gamma = 0.0;           ///< PolyBounded: |W(x)| <= bound (1 + |x|)^gamma
  double bound = 0.0;

  static PerturbationSpec zero();
  /// amplitude * exp(1 - 1/(1 - (x/R)^2)) on |x| < R.
  static PerturbationSpec compact_bump(double radius, double amplitude);
  /// amplitude on |x| <= R.
  static PerturbationSpec compact_indicator(double radius, double amplitude);
  /// amplitude * |x|^gamma.
  static PerturbationSpec poly_bounded(double gamma, double amplitude);
  static PerturbationSpec custom(Evaluator w, PerturbationKind kind, double support_radius,
                                 double l1_bound, double gamma, double bound);

  double operator()(double x) const { return w ? w(x) : 0.0; }
};

class PotentialSpec {
 public:
  static PotentialSpec harmonic();
  /// |x|^beta
  static PotentialSpec monomial(double beta);
  /// |x|^alpha log(1 + x^2)
  static PotentialSpec monomial_log(double alpha);
  /// exp(|x|^gamma)
  static PotentialSpec exponential(double gamma);
  /// User evaluators with declared nu and xi0. `beta` may be supplied when
  /// known; otherwise infer_beta estimates it.
  static PotentialSpec custom(CustomEvaluators ev, double nu, double xi0,
                              std::optional<double> beta = std::nullopt,
                              std::string name = "custom");

  PotentialSpec with_perturbation(PerturbationSpec w) const;
  /// Same potential with a different regularity threshold xi0 > 0.
  PotentialSpec with_xi0(double xi0) const;

  PotentialKind kind() const noexcept { return kind_; }
  /// beta, alpha or gamma of the family; 2 for Harmonic, NaN for Custom.
  double parameter() const noexcept { return param_; }
  double xi0() const noexcept { return xi0_; }
  double nu() const noexcept { return nu_; }
  const std::string& name() const noexcept { return name_; }
  std::optional<double> declared_beta() const noexcept { return declared_beta_; }

  /// True when V is strictly increasing on (0, infinity), so that the
  /// turning-point search may start at 0.
  bool monotone_on_half_line() const noexcept { return kind_ != PotentialKind::Custom; }

  double V(double x) const;
  Derivatives derivatives(double x) const;

  bool has_perturbation() const noexcept {
    return perturbation_.has_value() && perturbation_->kind != PerturbationKind::Zero;
  }
  const std::optional<PerturbationSpec>& perturbation() const noexcept { return perturbation_; }
  double W(double x) const { return has_perturbation() ? (*perturbation_)(x) : 0.0; }
  double Q(double x) const { return V(x) + W(x); }

 private:
  PotentialSpec() = default;

  PotentialKind kind_ = PotentialKind::Harmonic;
  double param_ = std::numeric_limits<double>::quiet_NaN();
  double xi0_ = 1.0;
  double nu_ = -1.0;
  std::string name_;
  std::optional<double> declared_beta_;
  CustomEvaluators custom_;
  std::optional<PerturbationSpec> perturbation_;
};

/// V(x) for the spec; alias of spec.V(x).
double eval_V(const PotentialSpec& spec, double x);

/// V(x t) / V(t) for each t in t_grid. x in (0, 1), entries of t_grid > xi0 / x.
std::vector<double> regular_variation_estimate(const PotentialSpec& spec, double x,
                                               const std::vector<double>& t_grid);

struct BetaFit {
  double beta = 0.0;
  double max_residual = 0.0;
};

/// Least-squares slope (through the origin) of log(V(xt)/V(t)) against
/// log x over x in {0.1, ..., 0.9} and t in {1e3, ..., 1e6}.
BetaFit fit_beta(const PotentialSpec& spec);

/// Limit exponent beta of V(xt)/V(t) -> |x|^beta; infinity when nu > -1.
/// Analytic families return their exact exponent. Custom specs with nu = -1
/// are fitted and rejected when the residual exceeds 1e-3.
double infer_beta(const PotentialSpec& spec);

struct AssumptionCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;  ///< the measured quantity the check is based on
  std::string detail;
};

struct AssumptionReport {
  bool passed = false;
  double growth_ratio_min = 0.0;  ///< min of V' / (V x^nu) over samples
  double growth_ratio_max = 0.0;
  double tail_v1 = 0.0;           ///< integral of V'^2 / V^{5/2} on (xi0, inf)
  double tail_v2 = 0.0;           ///< integral of |V''| / V^{3/2} on (xi0, inf)
  std::vector<AssumptionCheck> checks;

  const AssumptionCheck* find(const std::string& name) const;
};

/// Sample-based verification of the single-well conditions. Never throws for
/// a failing condition; failures are recorded in the report.
AssumptionReport check_assumptions(const PotentialSpec& spec, int sample_budget = 400);

/// Largest x with V(x) finite and below 1e300, searched geometrically.
double finite_range_limit(const PotentialSpec& spec);

/// Integral over (0, infinity) of W(s) / w1(s)^2. `breakpoints` lists
/// abscissae where w1 or W is not smooth (turning zone edges, support
/// radius); the tail past the last breakpoint is integrated by doubling
/// segments until a segment contributes below 1e-12.
double admissibility_JW(const PotentialSpec& spec, const Evaluator& w1,
                        std::vector<double> breakpoints);

}  // namespace concmeas
