#pragma once

/// Eigenpairs of -y'' + Q y = lambda y on the real line for even Q.
///
/// Even and odd eigenfunctions are computed separately on [0, x_max] with a
/// Neumann or Dirichlet condition at 0 and a Dirichlet condition at x_max,
/// using the second-order central-difference matrix (symmetric tridiagonal).
/// Eigenvalues come from Sturm-sequence bisection on three nested grids
/// (2h, h, h/2) followed by two Richardson steps; eigenvectors come from
/// inverse iteration on the finest grid.

#include <vector>

#include "concmeas/potential.hpp"

namespace concmeas {

enum class Parity { Even, Odd };

const char* to_string(Parity p) noexcept;

struct GridConfig {
  int points = 0;                    ///< intervals on the finest grid; 0 selects automatically
  double xmax_margin = 4.0;          ///< V(x_max) >= margin * lambda_max
  double tolerance = 1e-8;           ///< target relative eigenvalue accuracy
  double points_per_wavelength = 60; ///< finest-grid points per local wavelength at x = 0
  int min_points = 4000;
  int max_points = 200000;
  double min_forbidden_phase = 40.0; ///< integral of sqrt(V - lambda_max) beyond the turning point
};

struct Eigenpair {
  int k = 0;
  double lambda = 0.0;       ///< extrapolated eigenvalue
  double lambda_grid = 0.0;  ///< eigenvalue of the finest discrete operator
  Parity parity = Parity::Even;
  double h = 0.0;            ///< finest grid step
  double x_max = 0.0;
  std::vector<double> psi;   ///< psi(i h), i = 0..N, psi(x_max) = 0; full-line L2 norm 1
  double richardson_error = 0.0;  ///< |R(h, h/2) - R(2h, h)| / (15 lambda)
  double consistency = 0.0;       ///< |R(h, h/2) - R(2h, h)| / lambda
  double residual = 0.0;          ///< ||(T - lambda_grid) psi|| / (lambda ||psi||) on the grid

  double x(std::size_t i) const noexcept { return static_cast<double>(i) * h; }
  /// psi at any real x by linear interpolation and parity; 0 beyond x_max.
  double value(double x) const noexcept;
  /// 2 h (sum psi_i^2 - psi_0^2 / 2): the full-line trapezoid norm squared.
  double norm_sq() const noexcept;
};

/// WKB estimate of lambda_k from integral_0^{x_lambda} sqrt(lambda - V) = (pi/2)(k + 1/2).
double wkb_eigenvalue_estimate(const PotentialSpec& spec, int k);

/// Eigenpairs for k = 0..k_max.
std::vector<Eigenpair> solve_eigenpairs(const PotentialSpec& spec, int k_max, const GridConfig& cfg = {});

/// Eigenpairs for the listed indices (any order, duplicates removed), sharing
/// one grid sized for the largest index.
std::vector<Eigenpair> solve_indices(const PotentialSpec& spec, std::vector<int> ks, const GridConfig& cfg = {});

/// Sign changes of psi over [-epsilon x_lambda, epsilon x_lambda]. Points with
/// |psi| <= 10 eps ||psi||_inf are ignored; a zero at the origin is counted
/// for odd parity. Throws a Resolution error when the grid has fewer than
/// about three points per half wavelength.
int count_zeros(const Eigenpair& pair, double epsilon, double x_lambda);

/// Sign changes over the whole grid (both half-lines).
int count_all_zeros(const Eigenpair& pair);

/// Relative residual |sqrt(pi) Gamma(1+1/beta) / Gamma(3/2+1/beta) x_lambda
/// sqrt(lambda) / (pi k) - 1| per pair; NaN for k = 0. Throws Unsupported for
/// beta = infinity.
std::vector<double> eigenvalue_asymptotics_residual(const PotentialSpec& spec, const std::vector<Eigenpair>& pairs);

/// Count of eigenvalues below x of the symmetric tridiagonal matrix (d, e).
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x);

/// The j-th (0-based) eigenvalue of (d, e) by bisection to full precision.
double tridiagonal_eigenvalue(const std::vector<double>& d, const std::vector<double>& e, int j);

}  // namespace concmeas
