#pragma once

/// Turning-point geometry of V at a fixed energy lambda: the turning point
/// x_lambda, the slope a_lambda = V'(x_lambda), the transition widths delta and
/// delta1 at which the WKB phase reaches magnitude 1, and the tail integral
/// kappa_lambda.

#include <functional>

#include "concmeas/potential.hpp"

namespace concmeas {

struct TurningData {
  double lambda = 0.0;
  double x_lambda = 0.0;
  double a_lambda = 0.0;
  double delta = 0.0;   ///< zeta(x_lambda - delta) = 1
  double delta1 = 0.0;  ///< |zeta(x_lambda + delta1)| = 1
  double kappa_lambda = 0.0;
};

/// Positive root of V(x) = lambda, with |V(x) - lambda| / lambda <= 1e-12.
/// Analytic families are monotone on (0, infinity) and are bracketed from 0;
/// custom potentials are bracketed from xi0 and require lambda > V(xi0).
double turning_point(const PotentialSpec& spec, double lambda);

struct TransitionWidths {
  double delta = 0.0;
  double delta1 = 0.0;
};

/// Phase magnitude |zeta(x)| for the energy in question.
using PhaseMagnitude = std::function<double(double)>;

/// Solves zeta(x_lambda - delta) = 1 and |zeta(x_lambda + delta1)| = 1 by
/// bracketed root finding. Throws a Geometry error when zeta(0) < 1, i.e.
/// when lambda is too small for the oscillatory region to hold a unit phase.
TransitionWidths transition_widths(const PotentialSpec& spec, double lambda,
                                   const PhaseMagnitude& zeta);

/// Integral over (x_lambda, infinity) of |V''| / V^{3/2} + V'^2 / V^{5/2},
/// with the upper limit doubled until the relative increment is below 1e-8.
double kappa(const PotentialSpec& spec, double lambda);

/// Same integral started at a known turning point.
double kappa_from(const PotentialSpec& spec, double x_lambda);

/// Smallest lambda (to 1e-6 relative) with kappa_lambda below `kappa_target`;
/// the default threshold above which asymptotic statements are asserted.
double lambda_min_asymptotic(const PotentialSpec& spec, double kappa_target = 0.1);

/// Linearized width estimate (3 / (2 sqrt(a)))^{2/3}, exact for linear V.
double linear_width_estimate(double a_lambda);

}  // namespace concmeas
