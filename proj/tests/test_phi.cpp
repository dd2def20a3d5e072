#include "ohara/energy.hpp"
#include "ohara/error.hpp"
#include "ohara/phi.hpp"

#include <doctest.h>

#include <cmath>

using namespace ohara;

TEST_SUITE("phi") {

TEST_CASE("families and parsing") {
  CHECK(parse_phi_spec("power:alpha=2.5").family == PhiFamily::power);
  CHECK(parse_phi_spec("powerlog:alpha=2").alpha == 2.0);
  CHECK(parse_phi_spec("expfam:alpha=1.5")(1.0) == doctest::Approx(1.0 - std::exp(-1.0) + 0.5));
  CHECK_THROWS_AS(parse_phi_spec("cosh:alpha=1"), ValidationError);
  CHECK_THROWS_AS(parse_phi_spec("power"), ValidationError);
  CHECK_THROWS_AS(power_phi(0.0), ValidationError);
  for (double a : {0.3, 1.0, 2.5, 4.0}) {
    CHECK(derivative_consistency(power_phi(a)) < 1e-6);
    CHECK(derivative_consistency(powerlog_phi(a)) < 1e-6);
    CHECK(derivative_consistency(expfam_phi(a)) < 1e-6);
  }
}

TEST_CASE("custom families are validated") {
  const PhiSpec ok = custom_phi(
      "cube", [](double x) { return x * x * x; }, [](double x) { return 3 * x * x; });
  CHECK(ok(2.0) == 8.0);
  CHECK_THROWS_AS(custom_phi(
                      "wrong", [](double x) { return x * x; }, [](double x) { return x; }),
                  ValidationError);
  CHECK_THROWS_AS(custom_phi(
                      "shifted", [](double x) { return 1 + x; }, [](double) { return 1.0; }),
                  ValidationError);
}

TEST_CASE("G examples") {
  for (double x : {1e-9, 0.3, 1.0, 50.0})
    CHECK(G_value(power_phi(2.7), x) == doctest::Approx(2.7).epsilon(1e-14));
  CHECK(G_value(powerlog_phi(2.0), 1.0) == doctest::Approx(2.0 + 1.0 / (2.0 * std::log(2.0))).epsilon(1e-14));
  CHECK(std::abs(G_value(powerlog_phi(2.0), 1.0) - 2.721348) < 1e-6);
  // Taylor: G = alpha + x / ((1 + x) log(1 + x)); central difference cross-check.
  const PhiSpec pl = powerlog_phi(2.0);
  const double x = 0.7, h = 1e-6;
  const double fd = x * (pl(x + h) - pl(x - h)) / (2 * h) / pl(x);
  CHECK(G_value(pl, x) == doctest::Approx(fd).epsilon(1e-8));
  CHECK(std::abs(G_value(expfam_phi(1.0), 1e-6) - 1.0) < 1e-4);
  CHECK_THROWS_AS(G_value(power_phi(2.0), 0.0), ValidationError);
}

TEST_CASE("limit K") {
  const LimitEstimate p = limit_K(power_phi(2.5));
  CHECK(p.converged);
  CHECK(p.K == doctest::Approx(2.5).epsilon(1e-12));
  for (double g : p.samples)
    CHECK(std::abs(g - 2.5) < 1e-12);
  const LimitEstimate pl = limit_K(powerlog_phi(2.0));
  CHECK(pl.converged);
  CHECK(pl.K == doctest::Approx(3.0).epsilon(1e-9));
  const LimitEstimate ex = limit_K(expfam_phi(1.5));
  CHECK(ex.converged);
  CHECK(ex.K == doctest::Approx(1.5).epsilon(1e-9));
  CHECK_THROWS_AS(limit_K(power_phi(2.0), 1.0, 5), ValidationError);
  CHECK_THROWS_AS(limit_K(power_phi(2.0), -1.0, 40), ValidationError);
  // G oscillates for this Phi, so the ladder never settles.
  const PhiSpec wobble = custom_phi(
      "wobble", [](double x) { return x == 0.0 ? 0.0 : x * x * (2.0 + std::sin(std::log(x))); },
      [](double x) {
        return x == 0.0 ? 0.0 : 2 * x * (2.0 + std::sin(std::log(x))) + x * std::cos(std::log(x));
      });
  CHECK_FALSE(limit_K(wobble).converged);
}

TEST_CASE("psi") {
  CHECK(psi_value(power_phi(2.3), 1.0, 1.0) == 1.0);
  CHECK(psi_value(power_phi(2.0), 1.0, 4.0) == doctest::Approx(2.0).epsilon(1e-15));
  for (double a : {2.0, 2.5, 2.9})
    for (double p : {1.0, 2.0})
      for (double x : {1e-3, 0.2, 5.0})
        CHECK(psi_value(power_phi(a), p, x) == doctest::Approx(std::pow(x, EnergyParams(a, p).sigma())).epsilon(1e-13));
  CHECK_THROWS_AS(psi_value(power_phi(2.0), 1.0, 0.0), ValidationError);
}

TEST_CASE("M integral") {
  for (double a : {0.5, 1.0, 2.5}) {
    const LadderIntegral m = M_integral(power_phi(a), 1.0, 1.0);
    CHECK(m.status == LadderIntegral::Status::finite);
    CHECK(m.value == doctest::Approx(1.0 / a).epsilon(1e-6));
  }
  const LadderIntegral two = M_integral(power_phi(2.0), 1.0, 2.0);
  CHECK(two.status == LadderIntegral::Status::finite);
  CHECK(two.value == doctest::Approx(2.0).epsilon(1e-9));
  PhiSpec flat = power_phi(1.0);
  flat.comparison = [](double) { return 1.0; };
  CHECK(M_integral(flat, 1.0, 1.0).status == LadderIntegral::Status::divergent);
  PhiSpec none = power_phi(1.0);
  none.comparison.reset();
  CHECK_THROWS_AS(M_integral(none, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(M_integral(flat, 1.0, 0.0), ValidationError);
}

TEST_CASE("A3 integral") {
  // int_0^1 t^(2p - alpha p) dt = 1 / (2p - alpha p + 1).
  const LadderIntegral f = A3_integral(power_phi(2.5), 1.0, 1.0);
  CHECK(f.status == LadderIntegral::Status::finite);
  CHECK(f.value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(A3_integral(power_phi(3.0), 1.0, 1.0).status == LadderIntegral::Status::divergent);
  CHECK(A3_integral(power_phi(3.2), 1.0, 1.0).status == LadderIntegral::Status::divergent);
}

TEST_CASE("assumption reports") {
  const AssumptionReport a = check_assumptions(power_phi(2.5), 1.0);
  CHECK(a.finiteness_set() == Verdict::hold);
  CHECK(a.equivalence_set() == Verdict::hold);
  CHECK(a.bilipschitz_premise == Verdict::hold);
  CHECK(a.K == doctest::Approx(2.5));

  const AssumptionReport b = check_assumptions(powerlog_phi(2.5), 1.0);
  CHECK(b.a3 == Verdict::fail);
  CHECK(b.finiteness_set() == Verdict::fail);

  const AssumptionReport c = check_assumptions(power_phi(1.99), 1.0);
  CHECK(c.bilipschitz_premise == Verdict::fail);
  CHECK(c.finiteness_set() == Verdict::hold);

  const AssumptionReport d = check_assumptions(power_phi(1.0), 1.0);
  CHECK(d.a2_2 == Verdict::fail);
  CHECK(d.a2_3 == Verdict::hold);

  PhiSpec none = power_phi(2.0);
  none.comparison.reset();
  const AssumptionReport e = check_assumptions(none, 1.0);
  CHECK(e.a2_1 == Verdict::inconclusive);
  CHECK(e.finiteness_set() == Verdict::inconclusive);
  CHECK(e.a0 == Verdict::hold);

  // Comparison function that is too small violates (A2-1).
  PhiSpec weak = powerlog_phi(2.0);
  weak.comparison = [](double k) { return std::pow(k, 2.0); };
  CHECK(check_assumptions(weak, 1.0).a2_1 == Verdict::fail);
}

TEST_CASE("verdict conjunction") {
  CHECK(all_of({Verdict::hold, Verdict::hold}) == Verdict::hold);
  CHECK(all_of({Verdict::hold, Verdict::inconclusive}) == Verdict::inconclusive);
  CHECK(all_of({Verdict::inconclusive, Verdict::fail}) == Verdict::fail);
  CHECK(to_string(Verdict::fail) == "fail");
}

} // TEST_SUITE
