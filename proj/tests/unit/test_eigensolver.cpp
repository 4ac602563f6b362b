#include <cmath>
#include <numbers>

#include "concmeas/eigensolver.hpp"
#include "concmeas/errors.hpp"
#include "concmeas/measures.hpp"
#include "concmeas/turning.hpp"
#include "concmeas/wkb.hpp"
#include "doctest.h"

using namespace concmeas;

namespace {

// Independent Airy oracle: Maclaurin series in long double.
long double airy_series(long double z, bool derivative) {
  const long double c1 = 0.355028053887817239260L;
  const long double c2 = 0.258819403792806798405L;
  long double f = 1, g = z, fp = 0, gp = 1;
  long double tf = 1, tg = z;
  const long double z3 = z * z * z;
  for (int k = 1; k < 200; ++k) {
    tf *= z3 / ((3.0L * k - 1) * (3.0L * k));
    tg *= z3 / ((3.0L * k) * (3.0L * k + 1));
    f += tf;
    g += tg;
    fp += tf * 3 * k / z;
    gp += tg * (3 * k + 1) / z;
  }
  return derivative ? c1 * fp - c2 * gp : c1 * f - c2 * g;
}

double first_negative_zero(bool derivative) {
  long double lo = -3.0L, hi = -0.5L;
  const bool lo_positive = airy_series(lo, derivative) > 0;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    ((airy_series(mid, derivative) > 0) == lo_positive ? lo : hi) = mid;
  }
  return static_cast<double>(-0.5L * (lo + hi));
}

double inner(const Eigenpair& a, const Eigenpair& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.psi.size(); ++i) s += a.psi[i] * b.psi[i];
  s -= 0.5 * a.psi[0] * b.psi[0];
  return 2.0 * a.h * s;
}

}  // namespace

TEST_CASE("tridiagonal bisection against the discrete Laplacian spectrum") {
  const int n = 50;
  std::vector<double> d(n, 2.0), e(n - 1, -1.0);
  for (int j = 0; j < n; j += 7) {
    const double exact = 2.0 - 2.0 * std::cos((j + 1) * std::numbers::pi / (n + 1));
    CHECK(tridiagonal_eigenvalue(d, e, j) == doctest::Approx(exact).epsilon(1e-14));
  }
  CHECK(sturm_count(d, e, 2.0) == n / 2);
  CHECK_THROWS_AS(tridiagonal_eigenvalue(d, e, n), NumericError);
}

TEST_CASE("harmonic spectrum and eigenfunction invariants") {
  const auto spec = PotentialSpec::harmonic();
  const auto pairs = solve_eigenpairs(spec, 12);
  REQUIRE(pairs.size() == 13);
  for (const auto& p : pairs) {
    INFO("k = " << p.k);
    CHECK(p.lambda == doctest::Approx(2.0 * p.k + 1.0).epsilon(1e-8));
    CHECK(p.parity == (p.k % 2 == 0 ? Parity::Even : Parity::Odd));
    CHECK(p.norm_sq() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(p.residual <= 1e-6);
    CHECK(p.consistency <= 1e-6);
    CHECK(count_all_zeros(p) == p.k);
    CHECK(p.value(-1.3) == doctest::Approx((p.k % 2 ? -1.0 : 1.0) * p.value(1.3)));

    // sign convention and tail decay
    const PhaseContext ctx(spec, p.lambda);
    const double start = p.k >= 1 ? p.lambda : 0.0;
    (void)start;
    const double tail_from = ctx.turning().x_lambda + (ctx.has_widths() ? 2.0 * ctx.turning().delta1 : 2.0);
    double prev = std::abs(p.value(tail_from));
    CHECK(p.value(tail_from) > 0.0);
    bool monotone = true;
    for (double x = tail_from; x < p.x_max; x += 0.05) {
      const double v = std::abs(p.value(x));
      if (v > prev * (1 + 1e-9) && v > 1e-200) monotone = false;
      prev = v;
    }
    CHECK(monotone);
    CHECK(std::abs(p.value(p.x_max - p.h)) < 1e-10);
  }
  CHECK(pairs[0].psi[0] == doctest::Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-5));
  for (std::size_t j = 0; j < pairs.size(); ++j)
    for (std::size_t k = j + 2; k < pairs.size(); k += 2) CHECK(std::abs(inner(pairs[j], pairs[k])) <= 1e-6);
}

TEST_CASE("linear potential spectrum against Airy zeros") {
  const auto pairs = solve_eigenpairs(PotentialSpec::monomial(1.0), 1);
  const double a1p = first_negative_zero(true);
  const double a1 = first_negative_zero(false);
  CHECK(a1p == doctest::Approx(1.0187929716).epsilon(1e-9));
  CHECK(a1 == doctest::Approx(2.3381074105).epsilon(1e-9));
  CHECK(pairs[0].lambda == doctest::Approx(a1p).epsilon(1e-8));
  CHECK(pairs[1].lambda == doctest::Approx(a1).epsilon(1e-8));
}

TEST_CASE("selected indices share one grid") {
  const auto pairs = solve_indices(PotentialSpec::monomial(4.0), {20, 3, 20, 7});
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].k == 3);
  CHECK(pairs[2].k == 20);
  CHECK(pairs[0].h == pairs[2].h);
  CHECK_THROWS_AS(solve_indices(PotentialSpec::harmonic(), {-1}), ConfigError);
  GridConfig bad;
  bad.xmax_margin = 0.5;
  CHECK_THROWS_AS(solve_eigenpairs(PotentialSpec::harmonic(), 2, bad), ConfigError);
}

TEST_CASE("fixed grids skip refinement") {
  GridConfig cfg;
  cfg.points = 2000;
  const auto pairs = solve_eigenpairs(PotentialSpec::harmonic(), 3, cfg);
  CHECK(pairs[0].psi.size() == 2001);
  CHECK(pairs[3].lambda == doctest::Approx(7.0).epsilon(1e-7));
}

TEST_CASE("bounded potentials fail the truncation search") {
  CustomEvaluators ev{[](double x) { return 1.0 - std::exp(-x * x); },
                      [](double x) { return 2 * x * std::exp(-x * x); },
                      [](double x) { return (2 - 4 * x * x) * std::exp(-x * x); },
                      [](double x) { return (-12 * x + 8 * x * x * x) * std::exp(-x * x); }};
  CHECK_THROWS_AS(solve_eigenpairs(PotentialSpec::custom(ev, -1.0, 0.5, 2.0), 30), NumericError);
}

TEST_CASE("first-order perturbation shift") {
  const double amp = 1e-4;
  const auto base = solve_indices(PotentialSpec::harmonic(), {0, 1, 2});
  const auto pert = solve_indices(PotentialSpec::harmonic().with_perturbation(PerturbationSpec::compact_bump(1.0, amp)), {0, 1, 2});
  const auto bump = PerturbationSpec::compact_bump(1.0, amp);
  for (std::size_t i = 0; i < base.size(); ++i) {
    double expect = 0.0;
    for (std::size_t j = 0; j < base[i].psi.size(); ++j) {
      const double x = base[i].x(j);
      expect += (j == 0 ? 1.0 : 2.0) * base[i].h * bump(x) * base[i].psi[j] * base[i].psi[j];
    }
    CHECK(pert[i].lambda - base[i].lambda == doctest::Approx(expect).epsilon(1e-3));
  }
}

TEST_CASE("zero counts follow the semicircle and beta laws") {
  const auto h = PotentialSpec::harmonic();
  const auto p = solve_indices(h, {50})[0];
  const double xl = turning_point(h, p.lambda);
  CHECK(count_zeros(p, 1.0, xl) == 50);
  CHECK(count_zeros(p, 0.5, xl) / 50.0 == doctest::Approx(0.60900).epsilon(0.03 / 0.609));

  const auto q4 = PotentialSpec::monomial(4.0);
  const auto p4 = solve_indices(q4, {50})[0];
  CHECK(std::abs(count_zeros(p4, 1.0, turning_point(q4, p4.lambda)) / 50.0 - 1.0) <= 0.05);
  CHECK_THROWS_AS(count_zeros(p, 0.0, xl), ConfigError);

  Eigenpair coarse = p;
  coarse.h = 0.5;
  CHECK_THROWS_AS(count_zeros(coarse, 0.5, xl), NumericError);
}

TEST_CASE("eigenvalue asymptotics residual") {
  const auto h = PotentialSpec::harmonic();
  const auto pairs = solve_indices(h, {10, 20, 40, 50, 80});
  const auto r = eigenvalue_asymptotics_residual(h, pairs);
  CHECK(r[3] == doctest::Approx(0.01).epsilon(1e-6));
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] < r[i - 1]);

  const auto lin = PotentialSpec::monomial(1.0);
  CHECK(eigenvalue_asymptotics_residual(lin, solve_indices(lin, {40}))[0] < 0.05);
  CHECK(std::isnan(eigenvalue_asymptotics_residual(h, solve_indices(h, {0}))[0]));
  try {
    const auto ex = PotentialSpec::exponential(1.0);
    (void)eigenvalue_asymptotics_residual(ex, solve_indices(ex, {3}));
    FAIL("expected Unsupported");
  } catch (const NumericError& e) {
    CHECK(e.kind() == ErrorKind::Unsupported);
  }
}

TEST_CASE("WKB eigenvalue estimate is exact for the oscillator") {
  CHECK(wkb_eigenvalue_estimate(PotentialSpec::harmonic(), 7) == doctest::Approx(15.0).epsilon(1e-9));
}
