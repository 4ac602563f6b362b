#include "concmeas/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "concmeas/errors.hpp"

namespace concmeas::special {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-16;
constexpr double kFpMin = 1e-300;
constexpr int kMaxIt = 100000;
constexpr double kSmallX = 2.0;
constexpr double kLargeX = 25.0;

// Maclaurin coefficients of 1/Gamma(z) = sum_{k>=1} c_k z^k (c_1 .. c_22).
constexpr std::array<double, 22> kRGamma = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
};

// Temme's gamma auxiliaries for |mu| <= 1/2:
//   gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu),  gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

TemmeGammas temme_gammas(double mu) {
  // 1/G(1+z) = sum_k kRGamma[k] z^k
  double odd = 0.0, even = 0.0;
  const double mu2 = mu * mu;
  double p = 1.0;
  for (std::size_t k = 0; k < kRGamma.size(); k += 2) {
    even += kRGamma[k] * p;
    if (k + 1 < kRGamma.size()) odd += kRGamma[k + 1] * p;
    p *= mu2;
  }
  TemmeGammas g{};
  g.gam1 = -odd;
  g.gam2 = even;
  g.gampl = even + mu * odd;
  g.gammi = even - mu * odd;
  return g;
}

void require_args(double nu, double x, const char* who) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw NumericError(ErrorKind::Domain, std::string(who) + ": argument must be positive and finite", x);
  if (!(nu >= 0.0) || !std::isfinite(nu))
    throw NumericError(ErrorKind::Domain, std::string(who) + ": order must be non-negative", nu);
}

// Hankel expansion (DLMF 10.17.3-4): returns J, Y.
std::pair<double, double> jy_hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 0.0, q = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    if (k > 0) term *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (mag > last && k > 2) break;  // asymptotic series started diverging
    last = mag;
    switch (k % 4) {
      case 0: p += term; break;
      case 1: q += term; break;
      case 2: p -= term; break;
      default: q -= term; break;
    }
    if (mag < 1e-17 * (std::abs(p) + std::abs(q))) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  const double amp = std::sqrt(2.0 / (kPi * x));
  const double c = std::cos(chi);
  const double s = std::sin(chi);
  return {amp * (p * c - q * s), amp * (p * s + q * c)};
}

// Hankel expansions (DLMF 10.40.1-2): returns scaled I, K.
std::pair<double, double> ik_hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double si = 0.0, sk = 0.0;
  double term = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    if (k > 0) term *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * x);
    const double mag = std::abs(term);
    if (mag > last && k > 2) break;
    last = mag;
    sk += term;
    si += (k % 2 == 0) ? term : -term;
    if (mag < 1e-17 * std::abs(sk)) break;
  }
  return {si / std::sqrt(2.0 * kPi * x), std::sqrt(kPi / (2.0 * x)) * sk};
}

}  // namespace

double rgamma1p(double z) {
  double s = 0.0;
  for (std::size_t k = kRGamma.size(); k-- > 0;) s = s * z + kRGamma[k];
  return s;
}

BesselJY bessel_jy(double nu, double x) {
  require_args(nu, x, "bessel_jy");
  if (x >= kLargeX) {
    const auto [j, y] = jy_hankel(nu, x);
    const auto [j1, y1] = jy_hankel(nu + 1.0, x);
    return {j, y, nu / x * j - j1, nu / x * y - y1};
  }

  const int nl = (x < kSmallX) ? static_cast<int>(nu + 0.5)
                               : std::max(0, static_cast<int>(nu - x + 1.5));
  const double xmu = nu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  const double w = xi2 / kPi;

  // CF1: f = J'_nu / J_nu by modified Lentz
  int isign = 1;
  double h = nu * xi;
  if (h < kFpMin) h = kFpMin;
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  int it = 0;
  for (; it < kMaxIt; ++it) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b - 1.0 / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) <= kEps) break;
  }
  if (it == kMaxIt) throw NumericError(ErrorKind::NonConvergence, "bessel_jy: CF1 did not converge", x);

  double rjl = isign * kFpMin;
  double rjpl = h * rjl;
  const double rjl1 = rjl;
  const double rjp1 = rjpl;
  double fact = nu * xi;
  for (int l = nl - 1; l >= 0; --l) {
    const double rjtemp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * rjtemp - rjl;
    rjl = rjtemp;
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  double rjmu, rymu, rymup, ry1;
  if (x < kSmallX) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * xmu;
    const double fct = (std::abs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
    double dd = -std::log(x2);
    double e = xmu * dd;
    const double fact2 = (std::abs(e) < kEps) ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(xmu);
    double ff = 2.0 / kPi * fct * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * dd);
    e = std::exp(e);
    double p = e / (g.gampl * kPi);
    double q = 1.0 / (e * kPi * g.gammi);
    const double pimu2 = 0.5 * pimu;
    const double fact3 = (std::abs(pimu2) < kEps) ? 1.0 : std::sin(pimu2) / pimu2;
    const double r = kPi * pimu2 * fact3 * fact3;
    double cc = 1.0;
    dd = -x2 * x2;
    double sum = ff + r * q;
    double sum1 = p;
    int i = 1;
    for (; i < kMaxIt; ++i) {
      ff = (i * ff + p + q) / (i * i - xmu2);
      cc *= dd / i;
      p /= (i - xmu);
      q /= (i + xmu);
      const double del = cc * (ff + r * q);
      sum += del;
      const double del1 = cc * p - i * del;
      sum1 += del1;
      if (std::abs(del) < (1.0 + std::abs(sum)) * kEps) break;
    }
    if (i == kMaxIt) throw NumericError(ErrorKind::NonConvergence, "bessel_jy: Temme series did not converge", x);
    rymu = -sum;
    ry1 = -sum1 * xi2;
    rymup = xmu * xi * rymu - ry1;
    rjmu = w / (rymup - f * rymu);
  } else {
    // CF2 (Steed): p + i q = (J' + i Y') / (J + i Y)
    double a = 0.25 - xmu2;
    double p = -0.5 * xi;
    double q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    double fc = a * xi / (p * p + q * q);
    double cr = br + q * fc;
    double ci = bi + p * fc;
    double den = br * br + bi * bi;
    double dr = br / den;
    double di = -bi / den;
    double dlr = cr * dr - ci * di;
    double dli = cr * di + ci * dr;
    double temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    int i = 1;
    for (; i < kMaxIt; ++i) {
      a += 2 * i;
      bi += 2.0;
      dr = a * dr + br;
      di = a * di + bi;
      if (std::abs(dr) + std::abs(di) < kFpMin) dr = kFpMin;
      fc = a / (cr * cr + ci * ci);
      cr = br + cr * fc;
      ci = bi - ci * fc;
      if (std::abs(cr) + std::abs(ci) < kFpMin) cr = kFpMin;
      den = dr * dr + di * di;
      dr /= den;
      di /= -den;
      dlr = cr * dr - ci * di;
      dli = cr * di + ci * dr;
      temp = p * dlr - q * dli;
      q = p * dli + q * dlr;
      p = temp;
      if (std::abs(dlr - 1.0) + std::abs(dli) <= kEps) break;
    }
    if (i == kMaxIt) throw NumericError(ErrorKind::NonConvergence, "bessel_jy: CF2 did not converge", x);
    const double gam = (p - f) / q;
    rjmu = std::sqrt(w / ((p - f) * gam + q));
    rjmu = std::copysign(rjmu, rjl);
    rymu = rjmu * gam;
    rymup = rymu * (p + q / gam);
    ry1 = xmu * xi * rymu - rymup;
  }

  const double scale = rjmu / rjl;
  BesselJY out{};
  out.j = rjl1 * scale;
  out.jp = rjp1 * scale;
  for (int i = 1; i <= nl; ++i) {
    const double rytemp = (xmu + i) * xi2 * ry1 - rymu;
    rymu = ry1;
    ry1 = rytemp;
  }
  out.y = rymu;
  out.yp = nu * xi * rymu - ry1;
  return out;
}

BesselIKScaled bessel_ik_scaled(double nu, double x) {
  require_args(nu, x, "bessel_ik_scaled");
  if (x >= kLargeX) {
    const auto [i0, k0] = ik_hankel(nu, x);
    const auto [i1, k1] = ik_hankel(nu + 1.0, x);
    return {i0, k0, i1 + nu / x * i0, nu / x * k0 - k1};
  }

  const int nl = static_cast<int>(nu + 0.5);
  const double xmu = nu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;

  // CF1: f = I'_nu / I_nu
  double h = nu * xi;
  if (h < kFpMin) h = kFpMin;
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  int it = 0;
  for (; it < kMaxIt; ++it) {
    b += xi2;
    d = 1.0 / (b + d);
    c = b + 1.0 / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) <= kEps) break;
  }
  if (it == kMaxIt) throw NumericError(ErrorKind::NonConvergence, "bessel_ik: CF1 did not converge", x);

  double ril = kFpMin;
  double ripl = h * ril;
  const double ril1 = ril;
  const double rip1 = ripl;
  double fact = nu * xi;
  for (int l = nl - 1; l >= 0; --l) {
    const double ritemp = fact * ril + ripl;
    fact -= xi;
    ripl = fact * ritemp + ril;
    ril = ritemp;
  }
  const double f = ripl / ril;

  // rkmu, rk1 are e^x K_mu, e^x K_{mu+1}
  double rkmu, rk1;
  if (x < kSmallX) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * xmu;
    const double fct = (std::abs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
    double dd = -std::log(x2);
    double e = xmu * dd;
    const double fact2 = (std::abs(e) < kEps) ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(xmu);
    double ff = fct * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * dd);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double cc = 1.0;
    dd = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i < kMaxIt; ++i) {
      ff = (i * ff + p + q) / (i * i - xmu2);
      cc *= dd / i;
      p /= (i - xmu);
      q /= (i + xmu);
      const double del = cc * ff;
      sum += del;
      const double del1 = cc * (p - i * ff);
      sum1 += del1;
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i == kMaxIt) throw NumericError(ErrorKind::NonConvergence, "bessel_ik: Temme series did not converge", x);
    const double ex = std::exp(x);
    rkmu = sum * ex;
    rk1 = sum1 * xi2 * ex;
  } else {
    // CF2 (Steed / Temme) for e^x K_mu
    double bb = 2.0 * (1.0 + x);
    double dd = 1.0 / bb;
    double hh = dd;
    double delh = dd;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - xmu2;
    double q = a1;
    double cc = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 1;
    for (; i < kMaxIt; ++i) {
      a -= 2 * i;
      cc = -a * cc / (i + 1.0);
      const double qnew = (q1 - bb * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += cc * qnew;
      bb += 2.0;
      dd = 1.0 / (bb + a * dd);
      delh = (bb * dd - 1.0) * delh;
      hh += delh;
      const double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < kEps) break;
    }
    if (i == kMaxIt) throw NumericError(ErrorKind::NonConvergence, "bessel_ik: CF2 did not converge", x);
    hh = a1 * hh;
    rkmu = std::sqrt(kPi / (2.0 * x)) / s;
    rk1 = rkmu * (xmu + x + 0.5 - hh) * xi;
  }

  const double rkmup = xmu * xi * rkmu - rk1;
  // Wronskian I K' - I' K = -1/x; with e^x-scaled K this yields e^{-x} I
  const double rimu = xi / (f * rkmu - rkmup);
  BesselIKScaled out{};
  out.i = rimu * ril1 / ril;
  out.ip = rimu * rip1 / ril;
  for (int i = 1; i <= nl; ++i) {
    const double rktemp = (xmu + i) * xi2 * rk1 + rkmu;
    rkmu = rk1;
    rk1 = rktemp;
  }
  out.k = rkmu;
  out.kp = nu * xi * rkmu - rk1;
  return out;
}

double cyl_j(double nu, double x) {
  if (nu >= 0.0) return bessel_jy(nu, x).j;
  const double a = -nu;
  const BesselJY r = bessel_jy(a, x);
  if (a == std::floor(a)) {
    return (static_cast<long long>(a) % 2 == 0) ? r.j : -r.j;
  }
  return std::cos(a * kPi) * r.j - std::sin(a * kPi) * r.y;
}

double cyl_i_scaled(double nu, double x) {
  if (nu >= 0.0) return bessel_ik_scaled(nu, x).i;
  const double a = -nu;
  const BesselIKScaled r = bessel_ik_scaled(a, x);
  if (a == std::floor(a)) return r.i;
  // I_{-a} = I_a + (2/pi) sin(a pi) K_a
  return r.i + 2.0 / kPi * std::sin(a * kPi) * r.k * std::exp(-2.0 * x);
}

double cyl_k_scaled(double nu, double x) { return bessel_ik_scaled(std::abs(nu), x).k; }

AiryParts airy_parts(double z) {
  const double z3 = z * z * z;
  double tf = 1.0, tg = z;
  AiryParts a{1.0, z, 0.0, 1.0};
  double tfp = 0.0, tgp = 1.0;
  for (int k = 1; k < 200; ++k) {
    tf *= z3 / ((3.0 * k - 1.0) * (3.0 * k));
    tg *= z3 / ((3.0 * k) * (3.0 * k + 1.0));
    tfp = (k == 1) ? 0.5 * z * z : tfp * z3 / ((3.0 * k - 3.0) * (3.0 * k - 1.0));
    tgp *= z3 / ((3.0 * k - 2.0) * (3.0 * k));
    a.f += tf;
    a.g += tg;
    a.fp += tfp;
    a.gp += tgp;
    const double scale = std::abs(a.f) + std::abs(a.g) + std::abs(a.fp) + std::abs(a.gp);
    if (std::abs(tf) + std::abs(tg) + std::abs(tfp) + std::abs(tgp) < 1e-18 * scale) break;
  }
  return a;
}

double airy_ai(double z) {
  const AiryParts a = airy_parts(z);
  return kAiry0 * a.f - kAiryP0 * a.g;
}

double airy_bi(double z) {
  const AiryParts a = airy_parts(z);
  return std::sqrt(3.0) * (kAiry0 * a.f + kAiryP0 * a.g);
}

}  // namespace concmeas::special
