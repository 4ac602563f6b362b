#pragma once

/// Liouville-Green (WKB) machinery at a fixed energy lambda.
///
/// The phase zeta is integral_x^{x_lambda} (lambda - V)^{1/2} on the
/// oscillatory side and i integral_{x_lambda}^x (V - lambda)^{1/2} on the
/// forbidden side; this module reports its magnitude together with the side.
/// The model solutions are u = b K_{1/3}(-i zeta) and v = b I_{1/3}(-i zeta)
/// with b = (zeta / zeta')^{1/2}. They are evaluated from real Bessel
/// functions away from the turning point and from the equivalent Airy form
///   u = pi sqrt(2) eta'^{-1/2} Ai(eta),
///   v = 2^{-1/2} eta'^{-1/2} (Bi(eta) - sqrt(3) Ai(eta)),
/// with the Langer variable eta = sign(x - x_lambda) (3 |zeta| / 2)^{2/3}, when
/// |eta| <= 2. On the forbidden side u carries e^{-|zeta|} and v carries
/// e^{+|zeta|}; both are also returned as mantissas with that scale factored
/// out so that products never overflow.

#include <functional>
#include <vector>

#include "concmeas/potential.hpp"
#include "concmeas/turning.hpp"

namespace concmeas {

enum class Side { Oscillatory, Forbidden };

struct Phase {
  double magnitude = 0.0;
  Side side = Side::Oscillatory;
};

struct ModelSolutionSample {
  double x = 0.0;
  double u = 0.0;   ///< flushed to 0 when |zeta| > 700 on the forbidden side
  double v = 0.0;   ///< +-infinity when v_overflow
  double w1 = 0.0;
  double w2 = 0.0;  ///< infinity once |zeta| > 700 past x_lambda + delta1
  double u_mantissa = 0.0;  ///< u = u_mantissa * exp(-log_scale)
  double v_mantissa = 0.0;  ///< v = v_mantissa * exp(+log_scale)
  double log_scale = 0.0;   ///< |zeta| on the forbidden side, 0 otherwise
  bool v_overflow = false;
};

/// Immutable per-energy context: turning data and cached cumulative phase
/// anchors on both sides of the turning point. Safe to share between threads.
class PhaseContext {
 public:
  /// Throws when lambda does not exceed the bottom of the well. When the
  /// oscillatory phase never reaches 1 (very small lambda) the transition
  /// widths are unavailable: turning().delta is NaN and the weight-based
  /// operations throw a Geometry error.
  PhaseContext(PotentialSpec spec, double lambda);

  const PotentialSpec& spec() const noexcept { return spec_; }
  double lambda() const noexcept { return td_.lambda; }
  const TurningData& turning() const noexcept { return td_; }
  bool has_widths() const noexcept { return has_widths_; }

  Phase zeta(double x) const;
  double zeta_magnitude(double x) const { return zeta(x).magnitude; }

  ModelSolutionSample model_solutions(double x) const;

  double w1(double x) const;
  /// log w2: |zeta| past x_lambda + delta1, 0 before.
  double log_w2(double x) const;
  double w2(double x) const;

  /// Error potential K; finite through the turning point.
  double error_potential_K(double x) const;
  /// Closed-form limit of K at x_lambda: V'''/(14 a) - 9 V''^2 / (140 a^2).
  double K_at_turning_point() const noexcept { return k_turn_; }

  /// Breakpoints 0, x_lambda - delta, x_lambda, x_lambda + delta1 (those that
  /// are positive).
  std::vector<double> turning_breakpoints() const;

 private:
  struct Anchors {
    std::vector<double> tau;
    std::vector<double> cum;
  };

  double zeta_series(double t) const;
  double zeta_by_quadrature(double t) const;
  double K_direct(double x, double zeta_abs) const;
  void require_widths(const char* who) const;

  PotentialSpec spec_;
  TurningData td_;
  bool has_widths_ = false;
  double v2_turn_ = 0.0;
  double v3_turn_ = 0.0;
  double k_turn_ = 0.0;
  double series_radius_ = 0.0;
  double k_blend_radius_ = 0.0;
  Anchors osc_;
  Anchors forb_;
};

Phase zeta(const PhaseContext& ctx, double x);
ModelSolutionSample model_solutions(const PhaseContext& ctx, double x);
double error_potential_K(const PhaseContext& ctx, double x);

/// Integral over (0, infinity) of |K| / w1^2, split at 0, xi0, x_lambda -
/// delta', x_lambda -+ delta, x_lambda, x_lambda + delta1, x_lambda + delta''
/// with delta' = delta'' = x_lambda^{-nu} / 2; the forbidden tail is
/// truncated once a doubling segment contributes below 1e-12.
double JK_integral(const PhaseContext& ctx);

/// Integral over (0, infinity) of W / w1^2 for this energy.
double JW_integral(const PhaseContext& ctx);

struct UNorm {
  double norm_sq = 0.0;   ///< integral of u^2 over (0, infinity)
  double leading = 0.0;   ///< pi * integral_0^{x_lambda} (lambda - V)^{-1/2}
  double relative_correction = 0.0;
};

UNorm u_norm_integral(const PhaseContext& ctx);

/// G(x, s) = u(x) v(s) - v(x) u(s), assembled from log-scaled parts.
double green_kernel(const PhaseContext& ctx, double x, double s);

/// G(x, s) w1(x) w2(x) w1(s) / w2(s), bounded for 0 <= x <= s.
double green_kernel_weighted(const PhaseContext& ctx, double x, double s);

/// C(lambda) = (jk + jw) / (1 - jk - jw); throws AsymptoticRegime when
/// jk + jw >= 1.
double envelope_constant(double jk, double jw);

struct AsymptoticEnvelope {
  double constant = 0.0;
  std::function<double(double)> bound;  ///< C / (w1(x) w2(x))
};

AsymptoticEnvelope asymptotic_envelope(const PhaseContext& ctx, double jw, double jk);

struct Eigenpair;

/// sup over [0, x(|zeta| = zeta_stop)] on the forbidden side of
/// |c psi - u| w1 w2, with c the least-squares match of psi to u on
/// [0, x_lambda]. The context must be built at the eigenvalue of `pair`.
double envelope_residual_sup(const PhaseContext& ctx, const Eigenpair& pair, double zeta_stop = 8.0);

}  // namespace concmeas
