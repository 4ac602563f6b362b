#include <cmath>
#include <numbers>

#include "concmeas/errors.hpp"
#include "concmeas/potential.hpp"
#include "doctest.h"

using namespace concmeas;

TEST_CASE("analytic families evaluate V with evenness") {
  CHECK(eval_V(PotentialSpec::harmonic(), 3.0) == 9.0);
  CHECK(eval_V(PotentialSpec::monomial(4.0), -2.0) == doctest::Approx(16.0).epsilon(1e-15));
  CHECK(eval_V(PotentialSpec::exponential(1.0), 2.0) == doctest::Approx(7.38905609893065).epsilon(1e-14));
  CHECK(eval_V(PotentialSpec::monomial_log(2.0), -1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("derivatives agree with central differences") {
  const double h = 1e-5;
  for (const auto& spec : {PotentialSpec::monomial(3.5), PotentialSpec::monomial_log(2.0), PotentialSpec::exponential(1.5)}) {
    for (double x : {0.7, 1.3, 2.2}) {
      const Derivatives d = spec.derivatives(x);
      const Derivatives dp = spec.derivatives(x + h);
      const Derivatives dm = spec.derivatives(x - h);
      INFO(spec.name() << " at " << x);
      CHECK(d.d1 == doctest::Approx((dp.v - dm.v) / (2 * h)).epsilon(1e-7));
      CHECK(d.d2 == doctest::Approx((dp.d1 - dm.d1) / (2 * h)).epsilon(1e-7));
      CHECK(d.d3 == doctest::Approx((dp.d2 - dm.d2) / (2 * h)).epsilon(1e-6));
    }
  }
  const Derivatives odd = PotentialSpec::monomial(3.0).derivatives(-1.5);
  CHECK(odd.d1 == doctest::Approx(-3.0 * 1.5 * 1.5));
  CHECK(odd.d2 == doctest::Approx(6.0 * 1.5));
}

TEST_CASE("invalid family parameters are configuration errors naming the field") {
  try {
    (void)PotentialSpec::monomial(0.0);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "potential.beta");
  }
  CHECK_THROWS_AS((void)PotentialSpec::exponential(-1.0), ConfigError);
  CHECK_THROWS_AS((void)PotentialSpec::monomial_log(std::nan("")), ConfigError);
}

TEST_CASE("regular variation ratios approach the limit profile") {
  const std::vector<double> ts{1e2, 1e4, 1e6};
  const auto h = regular_variation_estimate(PotentialSpec::harmonic(), 0.5, ts);
  for (double r : h) CHECK(r == doctest::Approx(0.25).epsilon(1e-14));
  const auto ml = regular_variation_estimate(PotentialSpec::monomial_log(2.0), 0.5, ts);
  CHECK(std::abs(ml.back() - 0.25) < std::abs(ml.front() - 0.25));
  CHECK(ml.back() == doctest::Approx(0.25).epsilon(0.02));
  const auto ex = regular_variation_estimate(PotentialSpec::exponential(1.0), 0.5, {10.0, 100.0});
  CHECK(ex.back() < 1e-20);
  CHECK_THROWS_AS(regular_variation_estimate(PotentialSpec::harmonic(), 1.5, ts), NumericError);
}

TEST_CASE("beta inference") {
  CHECK(infer_beta(PotentialSpec::monomial(4.0)) == 4.0);
  CHECK(std::isinf(infer_beta(PotentialSpec::exponential(0.5))));
  CHECK(infer_beta(PotentialSpec::monomial_log(3.0)) == 3.0);

  // the regression path on a custom potential that is x^3 log(1 + x^2) in disguise
  const PotentialSpec ml = PotentialSpec::monomial_log(3.0);
  CustomEvaluators ev{[ml](double x) { return ml.V(x); }, [ml](double x) { return ml.derivatives(x).d1; },
                      [ml](double x) { return ml.derivatives(x).d2; }, [ml](double x) { return ml.derivatives(x).d3; }};
  const BetaFit fit = fit_beta(PotentialSpec::custom(ev, -1.0, 1.0));
  CHECK(fit.beta == doctest::Approx(3.0).epsilon(0.05));
  // the logarithmic factor keeps the finite-t residual above the acceptance tolerance
  CHECK(fit.max_residual > 1e-3);
  CHECK_THROWS_AS(infer_beta(PotentialSpec::custom(ev, -1.0, 1.0)), NumericError);

  CustomEvaluators wobble{[](double x) { return x * x * (2.0 + std::sin(std::log(x))); },
                          [](double x) { return x * (4.0 + 2.0 * std::sin(std::log(x)) + std::cos(std::log(x))); },
                          [](double) { return 1.0; }, [](double) { return 0.0; }};
  CHECK_THROWS_AS(infer_beta(PotentialSpec::custom(wobble, -1.0, 1.0)), NumericError);
}

TEST_CASE("assumption checks on the analytic families") {
  const AssumptionReport h = check_assumptions(PotentialSpec::harmonic());
  CHECK(h.passed);
  CHECK(h.growth_ratio_min == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(h.growth_ratio_max == doctest::Approx(2.0).epsilon(1e-14));

  const AssumptionReport lin = check_assumptions(PotentialSpec::monomial(1.0));
  CHECK(lin.passed);
  // integral_1^inf x^{-5/2} dx = 2/3
  CHECK(lin.tail_v1 == doctest::Approx(2.0 / 3.0).epsilon(1e-7));

  const PotentialSpec ex = PotentialSpec::exponential(1.0);
  CHECK(ex.nu() == 0.0);
  const AssumptionReport e = check_assumptions(ex);
  CHECK(e.passed);
  CHECK(e.growth_ratio_min == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.growth_ratio_max == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(check_assumptions(ex, 10), ConfigError);
}

TEST_CASE("a failing condition is reported by name") {
  CustomEvaluators ev{[](double x) { return 5.0 - x; }, [](double) { return -1.0; }, [](double) { return 0.0; },
                      [](double) { return 0.0; }};
  const AssumptionReport r = check_assumptions(PotentialSpec::custom(ev, -1.0, 1.0, 1.0));
  CHECK_FALSE(r.passed);
  const AssumptionCheck* mono = r.find("monotone_growth");
  REQUIRE(mono != nullptr);
  CHECK_FALSE(mono->passed);
}

TEST_CASE("perturbation constructors") {
  const auto bump = PerturbationSpec::compact_bump(2.0, 3.0);
  CHECK(bump(0.0) == doctest::Approx(3.0));
  CHECK(bump(2.0) == 0.0);
  CHECK(bump(-1.0) == bump(1.0));
  CHECK(bump.kind == PerturbationKind::CompactL1);
  const auto poly = PerturbationSpec::poly_bounded(1.0, 0.5);
  CHECK(poly(-4.0) == doctest::Approx(2.0));
  const auto spec = PotentialSpec::harmonic().with_perturbation(poly);
  CHECK(spec.Q(2.0) == doctest::Approx(5.0));
  CHECK_FALSE(PotentialSpec::harmonic().with_perturbation(PerturbationSpec::zero()).has_perturbation());
}

TEST_CASE("J_W admissibility integral") {
  const auto w1 = [](double lambda) {
    return [lambda](double x) { return std::pow(std::abs(lambda - x * x), 0.25); };
  };
  CHECK(admissibility_JW(PotentialSpec::harmonic(), w1(100.0), {10.0}) == 0.0);
  const auto spec = PotentialSpec::harmonic().with_perturbation(PerturbationSpec::compact_indicator(1.0, 1.0));
  CHECK(admissibility_JW(spec, w1(100.0), {10.0}) == doctest::Approx(std::asin(0.1)).epsilon(1e-9));
}
