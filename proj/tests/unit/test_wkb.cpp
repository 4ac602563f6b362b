#include <cmath>
#include <numbers>
#include <random>

#include "concmeas/errors.hpp"
#include "concmeas/special.hpp"
#include "concmeas/wkb.hpp"
#include "doctest.h"

using namespace concmeas;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<PotentialSpec> panel_potentials() {
  return {PotentialSpec::harmonic(), PotentialSpec::monomial(1.0), PotentialSpec::monomial(4.0),
          PotentialSpec::monomial_log(2.0), PotentialSpec::exponential(1.0)};
}

double wronskian(const PhaseContext& ctx, double x, double h) {
  const auto m = ctx.model_solutions(x);
  const auto p = ctx.model_solutions(x + h);
  const auto q = ctx.model_solutions(x - h);
  const double up = (p.u - q.u) / (2 * h);
  const double vp = (p.v - q.v) / (2 * h);
  return m.u * vp - m.v * up;
}

}  // namespace

TEST_CASE("phase closed forms") {
  const PhaseContext h(PotentialSpec::harmonic(), 1.0);
  CHECK(h.zeta(0.0).magnitude == doctest::Approx(kPi / 4).epsilon(1e-12));
  CHECK(h.zeta(0.0).side == Side::Oscillatory);
  CHECK(h.zeta(1.0).magnitude == 0.0);
  CHECK_FALSE(h.has_widths());

  const PhaseContext lin(PotentialSpec::monomial(1.0), 1.0);
  const Phase z = lin.zeta(2.0);
  CHECK(z.side == Side::Forbidden);
  CHECK(z.magnitude == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(lin.zeta(0.5).magnitude == doctest::Approx(2.0 / 3.0 * std::pow(0.5, 1.5)).epsilon(1e-12));
}

TEST_CASE("phase is monotone on both sides of the turning point") {
  const PhaseContext ctx(PotentialSpec::monomial(4.0), 300.0);
  const double xl = ctx.turning().x_lambda;
  double prev = ctx.zeta(0.0).magnitude;
  for (int i = 1; i <= 50; ++i) {
    const double z = ctx.zeta(xl * i / 50.0).magnitude;
    CHECK(z < prev);
    prev = z;
  }
  prev = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double z = ctx.zeta(xl * (1.0 + i / 50.0)).magnitude;
    CHECK(z > prev);
    prev = z;
  }
}

TEST_CASE("Wronskian of the model solutions is 1") {
  std::mt19937_64 rng(20240611);
  for (const auto& spec : panel_potentials()) {
    const PhaseContext ctx(spec, 200.0);
    const double xl = ctx.turning().x_lambda;
    INFO(spec.name());
    const double step = 1e-4 / std::sqrt(200.0);
    CHECK(wronskian(ctx, 0.5 * xl, step) == doctest::Approx(1.0).epsilon(1e-6));
    std::uniform_real_distribution<double> pick(0.02 * xl, 0.98 * xl);
    for (int i = 0; i < 10; ++i) CHECK(wronskian(ctx, pick(rng), step) == doctest::Approx(1.0).epsilon(1e-6));
    // through the Airy-form zone and onto the forbidden side
    for (double t : {-0.3, -0.01, 0.0, 0.02, 0.4, 1.0}) CHECK(wronskian(ctx, xl + t * ctx.turning().delta, step) == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("amplitude at the turning point scales like a^{-1/6}") {
  for (const auto& spec : panel_potentials()) {
    const PhaseContext ctx(spec, 500.0);
    const double xl = ctx.turning().x_lambda;
    const double ratio = ctx.model_solutions(xl).u * std::pow(ctx.turning().a_lambda, 1.0 / 6.0);
    CHECK(ratio == doctest::Approx(kPi * std::sqrt(2.0) * special::kAiry0).epsilon(1e-8));
  }
}

TEST_CASE("oscillatory amplitude law with an O(1/zeta) remainder") {
  const PhaseContext ctx(PotentialSpec::harmonic(), 1e4);
  const double xl = ctx.turning().x_lambda;
  double worst = 0.0;
  for (int i = 0; i < 4000; ++i) {
    const double x = xl * i / 4000.0;
    const double z = ctx.zeta(x).magnitude;
    if (z < 5.0 || z > 100.0) continue;
    const double u = ctx.model_solutions(x).u;
    const double r1 = u * u * std::sqrt(1e4 - x * x) / kPi - 1.0 - std::sin(2.0 * z);
    worst = std::max(worst, std::abs(r1) * z);
  }
  CHECK(worst > 0.0);
  CHECK(worst < 1.0);
}

TEST_CASE("error potential") {
  const PhaseContext lin(PotentialSpec::monomial(1.0), 1.0);
  CHECK(std::abs(lin.error_potential_K(0.5)) < 1e-10);

  const PhaseContext h(PotentialSpec::harmonic(), 100.0);
  CHECK(std::abs(h.error_potential_K(5.0)) < 1e-2);
  CHECK(h.K_at_turning_point() == doctest::Approx(-9.0 / 14000.0).epsilon(1e-12));
  CHECK(h.error_potential_K(h.turning().x_lambda) == doctest::Approx(h.K_at_turning_point()).epsilon(1e-9));

  // K f = -f'' + (V - lambda) f for the model solution f = u
  const PhaseContext ctx(PotentialSpec::harmonic(), 30.0);
  const double x = 0.5 * ctx.turning().x_lambda;
  const double hh = 2e-3;
  auto u = [&](double s) { return ctx.model_solutions(s).u; };
  const double upp = (-u(x + 2 * hh) + 16 * u(x + hh) - 30 * u(x) + 16 * u(x - hh) - u(x - 2 * hh)) / (12 * hh * hh);
  const double k_fd = (-upp + (x * x - 30.0) * u(x)) / u(x);
  CHECK(ctx.error_potential_K(x) == doctest::Approx(k_fd).epsilon(1e-4));
}

TEST_CASE("J_K integral") {
  for (double lambda : {3.0, 20.0, 150.0, 2000.0}) {
    const PhaseContext lin(PotentialSpec::monomial(1.0), lambda);
    CHECK(JK_integral(lin) <= 1e-8);
  }
  double prev = 1e300;
  for (double lambda = 100.0; lambda <= 1e4; lambda *= 2.0) {
    const double jk = JK_integral(PhaseContext(PotentialSpec::harmonic(), lambda));
    CHECK(jk < prev);
    prev = jk;
  }
  prev = 1e300;
  for (double lambda = 50.0; lambda <= 3200.0; lambda *= 2.0) {
    const double jk = JK_integral(PhaseContext(PotentialSpec::exponential(1.0), lambda));
    CHECK(jk < prev);
    prev = jk;
  }
  CHECK_THROWS_AS(JK_integral(PhaseContext(PotentialSpec::harmonic(), 1.0)), NumericError);
}

TEST_CASE("L2 norm of u") {
  const UNorm n = u_norm_integral(PhaseContext(PotentialSpec::harmonic(), 400.0));
  CHECK(n.leading == doctest::Approx(kPi * kPi / 2).epsilon(1e-10));
  CHECK(std::abs(n.relative_correction) < 0.05);
  double prev = 1.0;
  for (double lambda = 100.0; lambda <= 12800.0; lambda *= 2.0) {
    const double c = std::abs(u_norm_integral(PhaseContext(PotentialSpec::harmonic(), lambda)).relative_correction);
    CHECK(c < prev);
    prev = c;
  }
  // for the quartic the correction carries a cos(2 zeta(0)) boundary term and changes sign
  const double c50 = std::abs(u_norm_integral(PhaseContext(PotentialSpec::monomial(4.0), 50.0)).relative_correction);
  const double c12800 = std::abs(u_norm_integral(PhaseContext(PotentialSpec::monomial(4.0), 12800.0)).relative_correction);
  CHECK(c12800 < 0.1 * c50);
}

TEST_CASE("Green kernel") {
  const PhaseContext ctx(PotentialSpec::monomial(4.0), 300.0);
  const double xl = ctx.turning().x_lambda;
  for (double x : {0.3 * xl, xl, 1.2 * xl}) {
    CHECK(green_kernel(ctx, x, x) == doctest::Approx(0.0).epsilon(1e-12));
    const double h = 1e-6 * xl;
    const double ds = (green_kernel(ctx, x, x + h) - green_kernel(ctx, x, x - h)) / (2 * h);
    CHECK(ds == doctest::Approx(1.0).epsilon(1e-5));
  }
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i)
    for (int j = i; j <= 40; ++j) worst = std::max(worst, std::abs(green_kernel_weighted(ctx, 1.6 * xl * i / 40, 1.6 * xl * j / 40)));
  CHECK(worst < 10.0);
}

TEST_CASE("model solutions stay within the weight envelopes") {
  for (const auto& spec : panel_potentials()) {
    double worst = 0.0;
    for (double lambda : {100.0, 1000.0}) {
      const PhaseContext ctx(spec, lambda);
      const double xl = ctx.turning().x_lambda;
      for (int i = 0; i <= 300; ++i) {
        const double x = 2.0 * xl * i / 300.0;
        const auto m = ctx.model_solutions(x);
        if (m.v_overflow) continue;
        const double w1 = ctx.w1(x);
        worst = std::max(worst, std::abs(m.u_mantissa) * w1 * std::exp(ctx.log_w2(x) - m.log_scale));
        worst = std::max(worst, std::abs(m.v_mantissa) * w1 * std::exp(m.log_scale - ctx.log_w2(x)));
      }
    }
    INFO(spec.name());
    CHECK(worst < 5.0);
  }
}

TEST_CASE("forbidden-side scaling never overflows") {
  const PhaseContext ctx(PotentialSpec::exponential(1.0), 100.0);
  const auto m = ctx.model_solutions(12.0);
  CHECK(m.log_scale > 700.0);
  CHECK(m.u == 0.0);
  CHECK(m.v_overflow);
  CHECK(std::isfinite(m.u_mantissa));
  CHECK(std::isfinite(m.v_mantissa));
}

TEST_CASE("envelope constant") {
  CHECK(envelope_constant(0.1, 0.0) == doctest::Approx(1.0 / 9.0));
  const PhaseContext ctx(PotentialSpec::harmonic(), 100.0);
  const AsymptoticEnvelope zero = asymptotic_envelope(ctx, 0.0, 0.0);
  CHECK(zero.constant == 0.0);
  CHECK(zero.bound(3.0) == 0.0);
  try {
    (void)envelope_constant(0.6, 0.5);
    FAIL("expected AsymptoticRegime");
  } catch (const NumericError& e) {
    CHECK(e.kind() == ErrorKind::AsymptoticRegime);
  }
}
