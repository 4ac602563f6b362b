#pragma once

/// Rescaled eigenfunction measures and their limit.
///
/// The rescaled measure of an eigenpair has density x_lambda psi(x_lambda x)^2,
/// mapping the classically allowed region onto [-1, 1]. Its limit has density
/// c_beta (1 - |x|^beta)^{-1/2} on (-1, 1), and the uniform density 1/2 when
/// beta is infinite.

#include <functional>
#include <string>
#include <vector>

#include "concmeas/eigensolver.hpp"

namespace concmeas {

/// Omega'_beta = integral over [-1, 1] of (1 - |t|^beta)^{-1/2}
///            = 2 sqrt(pi) Gamma(1 + 1/beta) / Gamma(1/2 + 1/beta); 2 for beta = infinity.
double omega_const(double beta);

struct LimitDensity {
  double beta = 2.0;           ///< in (0, infinity]
  double normalization = 0.0;  ///< 1 / Omega'_beta

  /// Density at x; 0 outside (-1, 1). Diverges at +-1 for finite beta.
  double operator()(double x) const noexcept;
};

LimitDensity make_limit_density(double beta);
double limit_density(double beta, double x);

/// Integral of f against the limit measure. For finite beta each half of
/// [-1, 1] is mapped by x = 1 - tau^2, which leaves a bounded integrand.
/// `breakpoints` marks points in (-1, 1) where f is not smooth.
double limit_integral(const LimitDensity& mu, const std::function<double(double)>& f,
                      const std::vector<double>& breakpoints = {});

/// Total mass of the limit measure by quadrature (not by the normalization).
double limit_mass(double beta);

struct DensityOnGrid {
  std::vector<double> grid;
  std::vector<double> values;
  double mass = 0.0;  ///< trapezoid integral
};

/// 4096 uniform points on [-1.5, 1.5].
std::vector<double> default_measure_grid();

/// Density x_lambda psi(x_lambda x)^2 on `grid`, interpolating psi^2 with a
/// monotone cubic (PCHIP). Throws MassDeficit (value = measured mass) when
/// require_unit_mass is set and the trapezoid mass is off by more than 1e-4.
DensityOnGrid rescaled_measure(const Eigenpair& pair, double x_lambda, const std::vector<double>& grid,
                               bool require_unit_mass = true);
DensityOnGrid rescaled_measure(const Eigenpair& pair, double x_lambda);

/// Trapezoid integral of f against a sampled density.
double integrate(const DensityOnGrid& density, const std::function<double(double)>& f);

/// Trapezoid mass of the density outside [-a, a].
double mass_outside(const DensityOnGrid& density, double a);

struct TestFunction {
  std::string name;
  std::function<double(double)> f;
  std::vector<double> breakpoints;  ///< non-smooth points inside (-1, 1)
};

/// {1, x^2, cos(pi x), |x|, smooth bump supported in (0.2, 0.8)}.
std::vector<TestFunction> default_panel();

inline constexpr const char* kTrendDecreasing = "decreasing-or-flat";
inline constexpr const char* kTrendNonMonotone = "non-monotone";

struct ConvergenceRow {
  std::string f_name;
  std::vector<double> errors;  ///< one per entry of k_list
  std::string trend;
};

struct ConvergenceReport {
  std::string potential;
  double beta = 0.0;
  std::string family;        ///< "eigenfunction" or "freud"
  std::vector<int> k_list;   ///< eigen index, or polynomial degree for "freud"
  std::vector<ConvergenceRow> rows;

  const ConvergenceRow& row(const std::string& f_name) const;
};

/// Errors may rise by at most this much between consecutive entries and
/// still count as decreasing-or-flat.
inline constexpr double kTrendFlatTolerance = 1e-4;

std::string trend_of(const std::vector<double>& errors);

/// e_{k,f} = |integral f d mu_k - integral f d mu*| for every density and
/// panel member.
ConvergenceReport weak_convergence_report(const std::string& potential, const std::vector<int>& k_list,
                                          const std::vector<DensityOnGrid>& densities, const LimitDensity& limit,
                                          const std::vector<TestFunction>& panel);

/// Limiting proportion of zeros in [-eps x_lambda, eps x_lambda]:
/// Gamma(3/2 + 1/beta) / (sqrt(pi) Gamma(1 + 1/beta)) * integral_{-eps}^{eps} (1 - |x|^beta)^{1/2}.
double zero_distribution_limit(double beta, double epsilon);

}  // namespace concmeas
