#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "concmeas/eigensolver.hpp"
#include "concmeas/errors.hpp"
#include "concmeas/measures.hpp"
#include "concmeas/orthopoly.hpp"
#include "concmeas/turning.hpp"
#include "concmeas/wkb.hpp"

using namespace concmeas;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Outcome()> run;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ConvergenceReport eigen_report(const PotentialSpec& spec, double beta, const std::vector<int>& ks) {
  const auto pairs = solve_indices(spec, ks);
  std::vector<DensityOnGrid> ds;
  for (const auto& p : pairs) ds.push_back(rescaled_measure(p, turning_point(spec, p.lambda)));
  return weak_convergence_report(spec.name(), ks, ds, make_limit_density(beta), default_panel());
}

double max_last_error(const ConvergenceReport& rep) {
  double m = 0.0;
  for (const auto& r : rep.rows) m = std::max(m, r.errors.back());
  return m;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome harmonic_spectrum() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto pairs = solve_eigenpairs(PotentialSpec::harmonic(), 20);
  const double elapsed = seconds_since(t0);
  double worst = 0.0;
  for (const auto& p : pairs) worst = std::max(worst, std::abs(p.lambda / (2.0 * p.k + 1.0) - 1.0));
  return {worst <= 1e-6 && elapsed <= 30.0,
          "max relative error " + fmt("%.3e", worst) + " (<= 1e-6), runtime " + fmt("%.2f", elapsed) + " s (<= 30 s)"};
}

Outcome linear_airy_spectrum() {
  const auto pairs = solve_eigenpairs(PotentialSpec::monomial(1.0), 1);
  const double e0 = std::abs(pairs[0].lambda - 1.0187929);
  const double e1 = std::abs(pairs[1].lambda - 2.3381074);
  return {e0 <= 1e-5 && e1 <= 1e-5, "lambda0 " + fmt("%.9f", pairs[0].lambda) + ", lambda1 " + fmt("%.9f", pairs[1].lambda) +
                                         ", max deviation " + fmt("%.2e", std::max(e0, e1)) + " (<= 1e-5)"};
}

Outcome arcsine_law() {
  const auto spec = PotentialSpec::harmonic();
  const std::vector<int> ks{10, 20, 40, 60};
  const auto pairs = solve_indices(spec, ks);
  std::vector<DensityOnGrid> ds;
  double x2_dev = 0.0;
  for (const auto& p : pairs) {
    ds.push_back(rescaled_measure(p, turning_point(spec, p.lambda)));
    x2_dev = std::max(x2_dev, std::abs(integrate(ds.back(), [](double x) { return x * x; }) - 0.5));
  }
  const auto rep = weak_convergence_report(spec.name(), ks, ds, make_limit_density(2.0), default_panel());
  bool monotone = true;
  std::string bad;
  for (const auto& r : rep.rows)
    if (r.trend != kTrendDecreasing) {
      monotone = false;
      bad += " " + r.f_name;
    }
  const double last = max_last_error(rep);
  return {monotone && last <= 0.02 && x2_dev <= 1e-4,
          std::string("trends ") + (monotone ? "nonincreasing" : "violated by" + bad) + ", max error at k=60 " +
              fmt("%.3e", last) + " (<= 0.02), max |int x^2 - 1/2| " + fmt("%.2e", x2_dev) + " (<= 1e-4)"};
}

Outcome quartic_limit() {
  const double e = max_last_error(eigen_report(PotentialSpec::monomial(4.0), 4.0, {40}));
  return {e <= 0.03, "beta=4, k=40 max panel error " + fmt("%.3e", e) + " (<= 0.03)"};
}

Outcome exponential_uniform_limit() {
  const auto rep = eigen_report(PotentialSpec::exponential(1.0), kInf, {40});
  std::string worst_f;
  double e = 0.0;
  for (const auto& r : rep.rows)
    if (r.errors.back() > e) {
      e = r.errors.back();
      worst_f = r.f_name;
    }
  return {e <= 0.05, "exponential gamma=1, k=40 max panel error " + fmt("%.3e", e) + " on " + worst_f + " (<= 0.05)"};
}

Outcome semicircle_zero_law() {
  const auto spec = PotentialSpec::harmonic();
  const auto p = solve_indices(spec, {50})[0];
  const double xl = turning_point(spec, p.lambda);
  const double eps[3] = {0.25, 0.5, 1.0};
  const double target[3] = {0.33, 0.60900, 1.0};
  bool ok = true;
  std::ostringstream os;
  for (int i = 0; i < 3; ++i) {
    const double ratio = count_zeros(p, eps[i], xl) / 50.0;
    ok = ok && std::abs(ratio - target[i]) <= 0.05;
    os << (i ? ", " : "") << "eps=" << eps[i] << " ratio " << ratio << " vs " << target[i];
  }
  os << " (tolerance 0.05)";
  return {ok, os.str()};
}

Outcome eigenvalue_asymptotics() {
  const auto h = PotentialSpec::harmonic();
  const double r50 = eigenvalue_asymptotics_residual(h, solve_indices(h, {50}))[0];
  bool ok = std::abs(r50 - 0.01) <= 0.002;
  std::ostringstream os;
  os << "harmonic k=50 residual " << fmt("%.6f", r50) << " (0.01 +- 0.002)";
  for (double beta : {1.0, 2.0, 4.0}) {
    const auto spec = PotentialSpec::monomial(beta);
    const auto r = eigenvalue_asymptotics_residual(spec, solve_indices(spec, {10, 20, 40, 80}));
    bool dec = true;
    for (std::size_t i = 1; i < r.size(); ++i) dec = dec && r[i] < r[i - 1];
    ok = ok && dec;
    os << "; beta=" << beta << " residuals";
    for (double v : r) os << " " << fmt("%.2e", v);
    os << (dec ? " decreasing" : " NOT decreasing");
  }
  return {ok, os.str()};
}

Outcome wkb_pipeline_oracle() {
  double jk_max = 0.0;
  for (double lambda : {5.0, 20.0, 100.0, 1000.0, 1e4})
    jk_max = std::max(jk_max, JK_integral(PhaseContext(PotentialSpec::monomial(1.0), lambda)));

  std::mt19937_64 rng(20240611);
  const std::vector<PotentialSpec> specs{PotentialSpec::harmonic(), PotentialSpec::monomial(1.0), PotentialSpec::monomial(4.0),
                                         PotentialSpec::monomial_log(2.0), PotentialSpec::exponential(1.0)};
  const double lambda = 200.0;
  const double h = 1e-4 / std::sqrt(lambda);
  double w_dev = 0.0;
  for (const auto& spec : specs) {
    const PhaseContext ctx(spec, lambda);
    const double xl = ctx.turning().x_lambda;
    std::uniform_real_distribution<double> pick(0.0, 1.5 * xl);
    for (int i = 0; i < 10; ++i) {
      const double x = pick(rng);
      const auto m = ctx.model_solutions(x);
      const auto p = ctx.model_solutions(x + h);
      const auto q = ctx.model_solutions(x - h);
      const double w = m.u * (p.v - q.v) / (2 * h) - m.v * (p.u - q.u) / (2 * h);
      w_dev = std::max(w_dev, std::abs(w - 1.0));
    }
  }
  return {jk_max <= 1e-8 && w_dev <= 1e-6, "linear J_K max " + fmt("%.2e", jk_max) + " (<= 1e-8), max |W - 1| over 5 potentials x 10 points " +
                                                fmt("%.2e", w_dev) + " (<= 1e-6)"};
}

Outcome envelope_decay() {
  const auto h = PotentialSpec::harmonic();
  const auto pairs = solve_indices(h, {40, 80});
  const double s40 = envelope_residual_sup(PhaseContext(h, pairs[0].lambda), pairs[0]);
  const double s80 = envelope_residual_sup(PhaseContext(h, pairs[1].lambda), pairs[1]);
  std::vector<double> cs;
  bool c_dec = true;
  for (double lambda = pairs[0].lambda; lambda <= 16.0 * pairs[0].lambda; lambda *= 2.0) {
    cs.push_back(envelope_constant(JK_integral(PhaseContext(h, lambda)), 0.0));
    if (cs.size() > 1) c_dec = c_dec && cs.back() < cs[cs.size() - 2];
  }
  std::ostringstream os;
  os << "sup at lambda_40 " << fmt("%.3e", s40) << ", at lambda_80 " << fmt("%.3e", s80) << "; C(lambda) along doubling";
  for (double c : cs) os << " " << fmt("%.3e", c);
  return {std::isfinite(s40) && s80 < s40 && c_dec, os.str()};
}

Outcome perturbation_admissibility() {
  const auto spec = PotentialSpec::monomial(6.0).with_perturbation(PerturbationSpec::poly_bounded(1.0, 1.0));
  std::vector<double> ls, js;
  for (double lambda = 1e2; lambda <= 1e6 * 1.0001; lambda *= 10.0) {
    ls.push_back(lambda);
    js.push_back(JW_integral(PhaseContext(spec, lambda)));
  }
  const double slope = log_log_slope(ls, js);
  const bool slope_ok = std::abs(slope + 1.0 / 6.0) <= 0.02;

  double diff = 0.0;
  const auto bump = PerturbationSpec::compact_bump(1.0, 1.0);
  const auto base4 = eigen_report(PotentialSpec::monomial(4.0), 4.0, {40});
  const auto pert4 = eigen_report(PotentialSpec::monomial(4.0).with_perturbation(bump), 4.0, {40});
  const auto base_e = eigen_report(PotentialSpec::exponential(1.0), kInf, {40});
  const auto pert_e = eigen_report(PotentialSpec::exponential(1.0).with_perturbation(bump), kInf, {40});
  for (std::size_t j = 0; j < base4.rows.size(); ++j) {
    diff = std::max(diff, std::abs(base4.rows[j].errors[0] - pert4.rows[j].errors[0]));
    diff = std::max(diff, std::abs(base_e.rows[j].errors[0] - pert_e.rows[j].errors[0]));
  }
  return {slope_ok && diff <= 0.01, "J_W slope " + fmt("%.4f", slope) + " (-1/6 +- 0.02), max panel error change with bump " +
                                        fmt("%.2e", diff) + " (<= 0.01)"};
}

Outcome freud_alpha_independence() {
  const auto rep = arcsine_convergence_report({1.0, 2.0, 4.0}, {40}, default_panel());
  double err = 0.0, spread = 0.0;
  for (const auto& r : rep.per_alpha) err = std::max(err, max_last_error(r));
  for (double s : rep.spread[0]) spread = std::max(spread, s);
  double drift = 0.0;
  for (double alpha : {1.0, 2.0, 4.0}) drift = std::max(drift, build_recurrence(alpha, 40).orthonormality_drift);
  return {err <= 0.05 && spread <= 0.03 && drift <= 1e-8, "max panel error " + fmt("%.3e", err) + " (<= 0.05), cross-alpha spread " +
                                                              fmt("%.3e", spread) + " (<= 0.03), orthonormality drift " + fmt("%.2e", drift) +
                                                              " (<= 1e-8)"};
}

Outcome normalization_fixtures() {
  const double d = std::max({std::abs(omega_const(2.0) - kPi), std::abs(omega_const(1.0) - 4.0), std::abs(omega_const(kInf) - 2.0)});
  double m = 0.0;
  for (double beta : {0.5, 1.0, 2.0, 4.0, 8.0, kInf}) m = std::max(m, std::abs(limit_mass(beta) - 1.0));
  return {d <= 1e-8 && m <= 1e-8, "max Omega' deviation " + fmt("%.2e", d) + ", max mass deviation " + fmt("%.2e", m) + " (<= 1e-8)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  std::string only;
  double budget = 0.0;
  app.add_option("--only", only, "Run a single criterion by name");
  app.add_option("--time-budget", budget, "Run everything and report only whether the total time fits in this many seconds");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {"harmonic_spectrum", harmonic_spectrum},
      {"linear_airy_spectrum", linear_airy_spectrum},
      {"arcsine_law", arcsine_law},
      {"quartic_limit", quartic_limit},
      {"exponential_uniform_limit", exponential_uniform_limit},
      {"semicircle_zero_law", semicircle_zero_law},
      {"eigenvalue_asymptotics", eigenvalue_asymptotics},
      {"wkb_pipeline_oracle", wkb_pipeline_oracle},
      {"envelope_decay", envelope_decay},
      {"perturbation_admissibility", perturbation_admissibility},
      {"freud_alpha_independence", freud_alpha_independence},
      {"normalization_fixtures", normalization_fixtures},
  };

  const auto t0 = std::chrono::steady_clock::now();
  bool all = true;
  bool found = only.empty();
  for (const auto& c : criteria) {
    if (!only.empty() && c.name != only) continue;
    found = true;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  if (!found) {
    std::fprintf(stderr, "unknown criterion: %s\n", only.c_str());
    return 2;
  }
  if (budget > 0.0) {
    const double elapsed = seconds_since(t0);
    const bool ok = elapsed <= budget;
    std::printf("[%s] full_run_time_budget: %.1f s (<= %.0f s)\n", ok ? "PASS" : "FAIL", elapsed, budget);
    return ok ? 0 : 1;
  }
  return all ? 0 : 1;
}
