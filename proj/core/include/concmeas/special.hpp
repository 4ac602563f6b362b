#pragma once

/// Bessel functions of real order and positive real argument.
///
/// Small arguments (x < 2) use Temme's series for Y_nu / K_nu, mid-range
/// arguments use Steed's continued fractions, and x >= 25 switches to the
/// Hankel expansions whose neglected terms are below e^{-2x}. Target accuracy
/// is 1e-13 relative away from zeros of the functions.

namespace concmeas::special {

struct BesselJY {
  double j;   ///< J_nu(x)
  double y;   ///< Y_nu(x)
  double jp;  ///< J_nu'(x)
  double yp;  ///< Y_nu'(x)
};

/// Exponentially scaled modified Bessel functions.
struct BesselIKScaled {
  double i;   ///< e^{-x} I_nu(x)
  double k;   ///< e^{x} K_nu(x)
  double ip;  ///< e^{-x} I_nu'(x)
  double kp;  ///< e^{x} K_nu'(x)
};

/// nu >= 0, x > 0.
BesselJY bessel_jy(double nu, double x);

/// nu >= 0, x > 0.
BesselIKScaled bessel_ik_scaled(double nu, double x);

/// J_nu(x) for any real nu (reflection through Y for negative non-integer
/// order), x > 0.
double cyl_j(double nu, double x);

/// e^{-x} I_nu(x) for any real nu, x > 0.
double cyl_i_scaled(double nu, double x);

/// e^{x} K_nu(x), x > 0. K is even in nu.
double cyl_k_scaled(double nu, double x);

/// Maclaurin parts of the Airy functions: Ai = c1 f - c2 g and
/// Bi = sqrt(3) (c1 f + c2 g) with c1 = Ai(0), c2 = -Ai'(0). Accurate to a few
/// ulps for |z| <= 3; the series converges everywhere but cancels for large
/// negative z.
struct AiryParts {
  double f, g, fp, gp;
};
AiryParts airy_parts(double z);

inline constexpr double kAiry0 = 0.35502805388781723926;   ///< Ai(0)
inline constexpr double kAiryP0 = 0.25881940379280679840;  ///< -Ai'(0)

double airy_ai(double z);
double airy_bi(double z);

/// 1 / Gamma(1 + z) for |z| <= 1/2 by its Maclaurin series.
double rgamma1p(double z);

}  // namespace concmeas::special
