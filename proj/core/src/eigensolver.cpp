#include "concmeas/eigensolver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "concmeas/errors.hpp"
#include "concmeas/quadrature.hpp"
#include "concmeas/turning.hpp"

namespace concmeas {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Tridiagonal {
  std::vector<double> d;
  std::vector<double> e;
};

struct Discretization {
  int intervals = 0;
  double h = 0.0;
  Tridiagonal even;
  Tridiagonal odd;
};

// Q on the grid: V pointwise, W averaged over the cell [x - h/2, x + h/2].
std::vector<double> grid_potential(const PotentialSpec& spec, double h, int n) {
  std::vector<double> q(static_cast<std::size_t>(n));
  const bool pert = spec.has_perturbation();
  using GL = boost::math::quadrature::gauss<double, 4>;
  const auto& xs = GL::abscissa();
  const auto& ws = GL::weights();
  for (int i = 0; i < n; ++i) {
    const double x = i * h;
    double w = 0.0;
    if (pert) {
      for (std::size_t j = 0; j < xs.size(); ++j) {
        const double off = 0.5 * h * xs[j];
        w += 0.5 * ws[j] * (spec.W(x - off) + spec.W(x + off));
      }
      w *= 0.5;
    }
    q[static_cast<std::size_t>(i)] = spec.V(x) + w;
  }
  return q;
}

Discretization discretize(const PotentialSpec& spec, double x_max, int intervals) {
  Discretization D;
  D.intervals = intervals;
  D.h = x_max / intervals;
  const double ih2 = 1.0 / (D.h * D.h);
  const std::vector<double> q = grid_potential(spec, D.h, intervals);
  const std::size_t n = static_cast<std::size_t>(intervals);

  D.even.d.resize(n);
  D.even.e.assign(n - 1, -ih2);
  for (std::size_t i = 0; i < n; ++i) D.even.d[i] = 2.0 * ih2 + q[i];
  D.even.e[0] = -std::sqrt(2.0) * ih2;

  D.odd.d.resize(n - 1);
  D.odd.e.assign(n - 2, -ih2);
  for (std::size_t i = 1; i < n; ++i) D.odd.d[i - 1] = 2.0 * ih2 + q[i];
  return D;
}

double phase_below(const PotentialSpec& spec, double lambda) {
  const double xl = turning_point(spec, lambda);
  auto g = [&](double tau) {
    const double diff = lambda - spec.V(xl - tau * tau);
    return 2.0 * tau * std::sqrt(std::max(diff, 0.0));
  };
  quad::Options opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-14;
  return quad::adaptive(g, 0.0, std::sqrt(xl), opt).value;
}

double phase_above(const PotentialSpec& spec, double lambda, double x_lambda, double x) {
  auto g = [&](double s) { return std::sqrt(std::max(spec.V(s) - lambda, 0.0)); };
  quad::Options opt;
  opt.rel_tol = 1e-8;
  opt.abs_tol = 1e-10;
  return quad::adaptive(g, x_lambda, x, opt).value;
}

// Solves (T - sigma) x = b with partial pivoting (tridiagonal LU).
std::vector<double> shifted_solve(const Tridiagonal& T, double sigma, std::vector<double> b) {
  const std::size_t n = T.d.size();
  std::vector<double> dl(T.e), dd(n), du(T.e), du2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) dd[i] = T.d[i] - sigma;
  const double tiny = kEps * (std::abs(sigma) + 1.0);
  std::vector<char> swapped(n, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(dd[i]) >= std::abs(dl[i])) {
      if (std::abs(dd[i]) < tiny) dd[i] = tiny;
      const double f = dl[i] / dd[i];
      dl[i] = f;
      dd[i + 1] -= f * du[i];
      du2[i] = 0.0;
    } else {
      const double f = dd[i] / dl[i];
      dd[i] = dl[i];
      dl[i] = f;
      const double tmp = du[i];
      du[i] = dd[i + 1];
      dd[i + 1] = tmp - f * dd[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (std::abs(dd[n - 1]) < tiny) dd[n - 1] = tiny;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (swapped[i]) {
      const double tmp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tmp - dl[i] * b[i + 1];
    } else {
      b[i + 1] -= dl[i] * b[i];
    }
  }
  b[n - 1] /= dd[n - 1];
  if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
  for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
  return b;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> inverse_iteration(const Tridiagonal& T, double sigma) {
  const std::size_t n = T.d.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(0.618033988749895 * static_cast<double>(i));
  double nv = norm2(v);
  for (double& x : v) x /= nv;
  for (int it = 0; it < 4; ++it) {
    v = shifted_solve(T, sigma, std::move(v));
    nv = norm2(v);
    if (!(nv > 0.0) || !std::isfinite(nv))
      throw NumericError(ErrorKind::NonConvergence, "inverse iteration broke down", sigma);
    for (double& x : v) x /= nv;
  }
  return v;
}

double tridiagonal_residual(const Tridiagonal& T, double lambda, const std::vector<double>& v) {
  const std::size_t n = T.d.size();
  double r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = (T.d[i] - lambda) * v[i];
    if (i > 0) r += T.e[i - 1] * v[i - 1];
    if (i + 1 < n) r += T.e[i] * v[i + 1];
    r2 += r * r;
  }
  return std::sqrt(r2) / (std::abs(lambda) * norm2(v));
}

struct Solution {
  std::array<double, 3> lambdas{};  // 2h, h, h/2
};

Solution eigenvalues_on_grids(const std::array<Discretization, 3>& grids, int k) {
  Solution s;
  for (std::size_t g = 0; g < 3; ++g) {
    const Tridiagonal& T = (k % 2 == 0) ? grids[g].even : grids[g].odd;
    s.lambdas[g] = tridiagonal_eigenvalue(T.d, T.e, k / 2);
  }
  return s;
}

}  // namespace

const char* to_string(Parity p) noexcept { return p == Parity::Even ? "even" : "odd"; }

double Eigenpair::value(double xq) const noexcept {
  const double ax = std::abs(xq);
  if (psi.empty() || ax >= x_max) return 0.0;
  const double pos = ax / h;
  const std::size_t i = std::min(static_cast<std::size_t>(pos), psi.size() - 2);
  const double f = pos - static_cast<double>(i);
  const double y = psi[i] * (1.0 - f) + psi[i + 1] * f;
  return (xq < 0.0 && parity == Parity::Odd) ? -y : y;
}

double Eigenpair::norm_sq() const noexcept {
  double s = 0.0;
  for (double p : psi) s += p * p;
  if (!psi.empty()) s -= 0.5 * psi.front() * psi.front() + 0.5 * psi.back() * psi.back();
  return 2.0 * h * s;
}

int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  int count = 0;
  double q = d[0] - x;
  const double pivmin = std::numeric_limits<double>::min() * 4.0;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

double tridiagonal_eigenvalue(const std::vector<double>& d, const std::vector<double>& e, int j) {
  const std::size_t n = d.size();
  if (j < 0 || static_cast<std::size_t>(j) >= n)
    throw NumericError(ErrorKind::Domain, "tridiagonal_eigenvalue: index out of range", j);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(e[i - 1]);
    if (i + 1 < n) r += std::abs(e[i]);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  // tighten the upper end geometrically from the lower end; low eigenvalues
  // sit far below the Gershgorin bound
  double probe = lo;
  double width = std::max(1.0, std::abs(lo));
  while (probe + width < hi && sturm_count(d, e, probe + width) <= j) {
    probe += width;
    width *= 2.0;
  }
  lo = probe;
  hi = std::min(hi, probe + width);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi))) break;
    if (sturm_count(d, e, mid) > j)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double wkb_eigenvalue_estimate(const PotentialSpec& spec, int k) {
  if (k < 0) throw NumericError(ErrorKind::Domain, "wkb_eigenvalue_estimate: k must be non-negative", k);
  const double target = 0.5 * kPi * (k + 0.5);
  const double v0 = spec.V(spec.monotone_on_half_line() ? 0.0 : spec.xi0());
  double lo = v0 + 1e-9 * std::max(1.0, std::abs(v0));
  double hi = v0 + 1.0;
  double f_hi = phase_below(spec, hi) - target;
  while (f_hi < 0.0) {
    lo = hi;
    hi = v0 + 2.0 * (hi - v0);
    f_hi = phase_below(spec, hi) - target;
    if (!std::isfinite(hi)) throw NumericError(ErrorKind::NonConvergence, "wkb_eigenvalue_estimate: no bracket", k);
  }
  auto f = [&](double lam) { return phase_below(spec, lam) - target; };
  std::uintmax_t iters = 100;
  const auto r = boost::math::tools::toms748_solve(
      f, lo, hi, f(lo), f_hi, [](double a, double b) { return std::abs(b - a) <= 1e-12 * std::abs(b); }, iters);
  return 0.5 * (r.first + r.second);
}

std::vector<Eigenpair> solve_eigenpairs(const PotentialSpec& spec, int k_max, const GridConfig& cfg) {
  if (k_max < 0) throw ConfigError("k_max", "must be non-negative");
  std::vector<int> ks(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) ks[static_cast<std::size_t>(k)] = k;
  return solve_indices(spec, std::move(ks), cfg);
}

std::vector<Eigenpair> solve_indices(const PotentialSpec& spec, std::vector<int> ks, const GridConfig& cfg) {
  if (ks.empty()) return {};
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (ks.front() < 0) throw ConfigError("k_list", "indices must be non-negative");
  if (!(cfg.xmax_margin > 1.0)) throw ConfigError("grid.xmax_margin", "must exceed 1");
  if (!(cfg.tolerance > 0.0)) throw ConfigError("solver.tolerance", "must be positive");
  if (cfg.points != 0 && cfg.points < 64) throw ConfigError("grid.points", "must be 0 (automatic) or at least 64");

  const int k_top = ks.back();
  double lambda_cap = 1.2 * wkb_eigenvalue_estimate(spec, k_top);
  const double v0 = spec.V(0.0);

  for (int attempt = 0; attempt < 8; ++attempt) {
    // truncation point
    const double x_cap = turning_point(spec, lambda_cap);
    double x_max = turning_point(spec, cfg.xmax_margin * lambda_cap);
    for (int grow = 0; phase_above(spec, lambda_cap, x_cap, x_max) < cfg.min_forbidden_phase; ++grow) {
      if (grow > 60) throw NumericError(ErrorKind::Geometry, "x_max search failed: forbidden phase stays small", x_max);
      x_max = x_cap + 1.5 * (x_max - x_cap);
      if (!std::isfinite(spec.V(x_max)))
        throw NumericError(ErrorKind::Geometry, "x_max search failed: V overflows", x_max);
    }

    int n = cfg.points;
    if (n == 0) {
      const double wavelength = 2.0 * kPi / std::sqrt(std::max(lambda_cap - v0, 1e-300));
      n = static_cast<int>(std::ceil(x_max / (wavelength / cfg.points_per_wavelength)));
      n = std::clamp(n, cfg.min_points, cfg.max_points);
    }
    n = 4 * ((n + 3) / 4);

    std::vector<Eigenpair> out;
    std::array<Discretization, 3> grids;
    double worst = 0.0;
    std::vector<Solution> sols;
    for (;;) {
      for (int g = 0; g < 3; ++g) grids[static_cast<std::size_t>(g)] = discretize(spec, x_max, n >> (2 - g));
      sols.clear();
      worst = 0.0;
      for (int k : ks) {
        const Solution s = eigenvalues_on_grids(grids, k);
        const double r1 = (4.0 * s.lambdas[1] - s.lambdas[0]) / 3.0;
        const double r2 = (4.0 * s.lambdas[2] - s.lambdas[1]) / 3.0;
        worst = std::max(worst, std::abs(r2 - r1) / (15.0 * std::abs(r2)));
        sols.push_back(s);
      }
      if (worst <= cfg.tolerance || cfg.points != 0 || 2 * n > cfg.max_points) break;
      n *= 2;
    }

    const Discretization& fine = grids[2];
    double top = 0.0;
    for (std::size_t idx = 0; idx < ks.size(); ++idx) {
      const int k = ks[idx];
      const Solution& s = sols[idx];
      Eigenpair p;
      p.k = k;
      p.parity = (k % 2 == 0) ? Parity::Even : Parity::Odd;
      p.h = fine.h;
      p.x_max = x_max;
      p.lambda_grid = s.lambdas[2];
      const double r1 = (4.0 * s.lambdas[1] - s.lambdas[0]) / 3.0;
      const double r2 = (4.0 * s.lambdas[2] - s.lambdas[1]) / 3.0;
      p.lambda = (16.0 * r2 - r1) / 15.0;
      p.consistency = std::abs(r2 - r1) / std::abs(p.lambda);
      p.richardson_error = p.consistency / 15.0;
      top = std::max(top, p.lambda);

      // the two parity classes must interleave: exactly k eigenvalues below lambda_k
      const double probe = p.lambda_grid - 1e-9 * std::max(1.0, std::abs(p.lambda_grid));
      const int below = sturm_count(fine.even.d, fine.even.e, probe) + sturm_count(fine.odd.d, fine.odd.e, probe);
      if (below != k)
        throw NumericError(ErrorKind::Consistency, "eigenvalue parity classes do not alternate", k);

      const Tridiagonal& T = (p.parity == Parity::Even) ? fine.even : fine.odd;
      const std::vector<double> phi = inverse_iteration(T, p.lambda_grid);
      p.residual = tridiagonal_residual(T, p.lambda_grid, phi);

      const std::size_t N = static_cast<std::size_t>(fine.intervals);
      p.psi.assign(N + 1, 0.0);
      if (p.parity == Parity::Even) {
        p.psi[0] = std::sqrt(2.0) * phi[0];
        for (std::size_t i = 1; i < N; ++i) p.psi[i] = phi[i];
      } else {
        for (std::size_t i = 1; i < N; ++i) p.psi[i] = phi[i - 1];
      }
      const double nrm = std::sqrt(p.norm_sq());
      double peak = 0.0;
      for (double& v : p.psi) {
        v /= nrm;
        peak = std::max(peak, std::abs(v));
      }
      for (std::size_t i = N + 1; i-- > 0;) {
        if (std::abs(p.psi[i]) > 1e-6 * peak) {
          if (p.psi[i] < 0.0)
            for (double& v : p.psi) v = -v;
          break;
        }
      }
      out.push_back(std::move(p));
    }
    if (top <= lambda_cap) return out;
    lambda_cap = 1.2 * top;
  }
  throw NumericError(ErrorKind::NonConvergence, "solve_indices: eigenvalues keep exceeding the truncation estimate",
                     lambda_cap);
}

int count_zeros(const Eigenpair& pair, double epsilon, double x_lambda) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon", "must lie in (0, 1]");
  if (!(x_lambda > 0.0)) throw NumericError(ErrorKind::Domain, "count_zeros: x_lambda must be positive", x_lambda);
  const double limit = epsilon * x_lambda;
  const double bandwidth = pair.h * std::sqrt(std::max(pair.lambda_grid, 0.0));
  if (bandwidth > 1.0)
    throw NumericError(ErrorKind::Resolution, "count_zeros: grid too coarse to separate sign changes", bandwidth);
  double peak = 0.0;
  for (double v : pair.psi) peak = std::max(peak, std::abs(v));
  const double floor = 10.0 * kEps * peak;

  int half = 0;
  double prev_x = 0.0;
  double prev_v = 0.0;
  bool have_prev = false;
  for (std::size_t i = 1; i < pair.psi.size(); ++i) {
    const double v = pair.psi[i];
    const double x = pair.x(i);
    if (std::abs(v) <= floor) continue;
    if (have_prev && (v > 0.0) != (prev_v > 0.0)) {
      const double root = prev_x + (x - prev_x) * prev_v / (prev_v - v);
      if (root <= limit) ++half;
    }
    if (x > limit) break;
    prev_x = x;
    prev_v = v;
    have_prev = true;
  }
  return 2 * half + (pair.parity == Parity::Odd ? 1 : 0);
}

int count_all_zeros(const Eigenpair& pair) {
  return count_zeros(pair, 1.0, pair.x_max);
}

std::vector<double> eigenvalue_asymptotics_residual(const PotentialSpec& spec, const std::vector<Eigenpair>& pairs) {
  const double beta = infer_beta(spec);
  if (!std::isfinite(beta))
    throw NumericError(ErrorKind::Unsupported, "eigenvalue asymptotics require a finite beta", beta);
  const double c = std::sqrt(kPi) * std::tgamma(1.0 + 1.0 / beta) / std::tgamma(1.5 + 1.0 / beta);
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const Eigenpair& p : pairs) {
    if (p.k == 0) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double xl = turning_point(spec, p.lambda);
    out.push_back(std::abs(c * xl * std::sqrt(p.lambda) / (kPi * p.k) - 1.0));
  }
  return out;
}

}  // namespace concmeas
