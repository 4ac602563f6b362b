#pragma once

/// Orthonormal polynomials for the Freud weight exp(-kappa_alpha |x|^alpha)
/// and their rescaled densities n^{1/alpha} p_n(n^{1/alpha} x)^2 w(n^{1/alpha} x),
/// which concentrate on the arcsine law for every alpha.

#include <string>
#include <vector>

#include "concmeas/measures.hpp"

namespace concmeas {

/// kappa_alpha = Gamma(alpha/2) Gamma(1/2) / Gamma((alpha+1)/2).
double kappa_alpha(double alpha);

inline constexpr int kFreudMaxDegree = 60;

struct FreudSystem {
  double alpha = 2.0;
  double kappa = 2.0;
  int n_max = 0;
  double mu0 = 0.0;                ///< total mass of the weight
  std::vector<double> a;           ///< a[n], n = 1..n_max; a[0] = 0
  std::vector<double> b;           ///< diagonal coefficients, identically 0
  double truncation = 0.0;         ///< quadrature covers [-truncation, truncation]
  std::vector<double> nodes;       ///< positive half-line nodes of the discretized weight
  std::vector<double> weights;     ///< Gauss weights times w(node); mirrored for x < 0
  double orthonormality_drift = 0.0;  ///< max |<p_n, p_m> - delta_nm| on an independent refined rule
};

/// Discretized Stieltjes procedure on a composite Gauss-Legendre rule of the
/// half line [0, X], mirrored to the full line. The weight is e^{-80} below
/// the quadrature floor at X. Orthonormality is verified on a rule with twice
/// as many panels; a Precision error names the first failing degree.
FreudSystem build_recurrence(double alpha, int n_max);

/// p_n(x) by the three-term recurrence.
double orthonormal_poly(const FreudSystem& sys, int n, double x);

/// n^{1/alpha} p_n(y)^2 w(y) with y = n^{1/alpha} x, evaluated in log space.
/// Returns 0 and sets *underflow when the weight overwhelms the polynomial.
double rescaled_poly_density(const FreudSystem& sys, int n, double x, bool* underflow = nullptr);

/// Integral of f against the rescaled density, on the system's own rule.
double rescaled_poly_integral(const FreudSystem& sys, int n, const std::function<double(double)>& f);

/// Average of the rescaled density over [x - width/2, x + width/2].
double window_average(const FreudSystem& sys, int n, double x, double width = 0.05);

/// Max over `xs` of the rescaled density times sqrt(|1 - x^2|).
double sup_weighted_density(const FreudSystem& sys, int n, const std::vector<double>& xs);

/// Least-squares slope of log a_n against log n for n in [n_lo, n_max].
double freud_growth_slope(const FreudSystem& sys, int n_lo);

struct FreudReport {
  std::vector<ConvergenceReport> per_alpha;  ///< family "freud", k_list holds degrees
  std::vector<int> n_list;
  /// spread[i][j]: max - min over alpha of the error for n_list[i] and panel member j.
  std::vector<std::vector<double>> spread;
  std::vector<std::string> f_names;
};

/// Errors |integral f dnu_n - (1/pi) integral f (1 - x^2)^{-1/2}| per alpha
/// and degree, plus the cross-alpha spread.
FreudReport arcsine_convergence_report(const std::vector<double>& alphas, const std::vector<int>& n_list,
                                       const std::vector<TestFunction>& panel);

/// psi_alpha(x) = (alpha/pi) x^{alpha-1} integral_1^{1/x} u^{alpha-1} (u^2 - 1)^{-1/2} du
/// for 0 < x <= 1, computed after u = cosh(tau).
double phase_function_psi(double alpha, double x);

}  // namespace concmeas
