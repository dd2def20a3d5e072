#include "ohara/curves.hpp"
#include "ohara/error.hpp"
#include "ohara/sobolev.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace ohara;

namespace {

constexpr double kPi = std::numbers::pi;

// Trefoil rotated by a fixed orthogonal matrix.
ParamCurve rotated_trefoil() {
  const ParamCurve base = torus_knot(2, 3, 2.0, 1.0);
  const double c = std::cos(0.7), s = std::sin(0.7), c2 = std::cos(1.3), s2 = std::sin(1.3);
  auto rot = [=](const Point &v) {
    const double x = c * v[0] - s * v[1], y = s * v[0] + c * v[1];
    return Point{x, c2 * y - s2 * v[2], s2 * y + c2 * v[2]};
  };
  return ParamCurve(
      "rotated trefoil", 3, [=](double t) { return rot(base.position(t)); },
      [=](double t) { return rot(base.velocity(t)); }, [=](double t) { return rot(base.acceleration(t)); });
}

} // namespace

TEST_SUITE("sobolev") {

TEST_CASE("spectral shift integral matches the circle closed form") {
  for (double L : {1.0, 2.0 * kPi}) {
    const TangentSpectrum spec(circle_curve(L / (2.0 * kPi)));
    CHECK(spec.unit_defect() < 1e-12);
    for (double h : {1e-6 * L, 1e-3 * L, 0.1 * L, 0.37 * L, 0.5 * L}) {
      const double exact = L * std::pow(2.0 * std::sin(kPi * h / L), 2.0);
      CHECK(spec.shift_integral(h, 2.0) == doctest::Approx(exact).epsilon(1e-10));
      const double exact4 = L * std::pow(2.0 * std::sin(kPi * h / L), 4.0);
      CHECK(spec.shift_integral(h, 4.0) == doctest::Approx(exact4).epsilon(1e-10));
    }
  }
}

TEST_CASE("cutoff seminorm stabilizes for a finite-energy exponent") {
  const ParamCurve c = circle_curve(1.0);
  const SeminormJob job = make_seminorm_job(c, power_phi(2.0), 1.0);
  double prev = 0.0, last_change = 1.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const double v = seminorm_cutoff(job, eps);
    CHECK(v >= prev);
    if (prev > 0.0)
      last_change = (v - prev) / v;
    prev = v;
  }
  CHECK(last_change < 1e-3);
  CHECK_THROWS_AS(seminorm_cutoff(job, 0.0), ValidationError);
  CHECK_THROWS_AS(seminorm_cutoff(job, 4.0), ValidationError);
}

TEST_CASE("cutoff seminorm grows as a power law beyond the energy range") {
  const ParamCurve c = circle_curve(1.0);
  SeminormJob job = make_seminorm_job(c, power_phi(3.2), 1.0);
  job.eps_ladder = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const SeminormLadder lad = seminorm_ladder(job);
  for (std::size_t j = 1; j < lad.value.size(); ++j)
    CHECK(lad.value[j] > lad.value[j - 1]);
  const double d1 = lad.value[4] - lad.value[3];
  const double d2 = lad.value[5] - lad.value[4];
  CHECK(std::log10(d2 / d1) == doctest::Approx(0.2).epsilon(0.1));
}

TEST_CASE("finiteness diagnostic on the circle") {
  const ParamCurve c = circle_curve(0.5 / kPi);
  FinitenessOptions opts;
  opts.energy_n_max = 1024;

  const FinitenessReport f25 = finiteness_diagnostic(c, power_phi(2.5), 1.0, opts);
  CHECK(f25.classification == Finiteness::finite);
  CHECK(f25.energy_extrapolated);
  CHECK(f25.energy_estimate == doctest::Approx(13.50489).epsilon(1e-3));

  const FinitenessReport f2 = finiteness_diagnostic(c, power_phi(2.0), 1.0, opts);
  CHECK(f2.classification == Finiteness::finite);
  CHECK(std::abs(f2.energy_estimate - 4.0) < 1e-4);

  for (double a : {3.2, 3.5}) {
    const FinitenessReport d = finiteness_diagnostic(c, power_phi(a), 1.0, opts);
    CHECK(d.classification == Finiteness::divergent);
    REQUIRE(d.divergence_exponent.has_value());
    CHECK(*d.divergence_exponent == doctest::Approx(a - 3.0).epsilon(0.1));
    CHECK_FALSE(d.energy_extrapolated);
    for (std::size_t j = 1; j < d.energy_ladder.size(); ++j)
      CHECK(d.energy_ladder[j].value > d.energy_ladder[j - 1].value);
  }
  for (const auto &fam : {"powerlog", "expfam"}) {
    const FinitenessReport r = finiteness_diagnostic(c, make_phi(fam, 1.5), 1.0, opts);
    CHECK(r.classification == Finiteness::finite);
    for (std::size_t j = 1; j < r.ladder.value.size(); ++j)
      CHECK(r.ladder.value[j] >= r.ladder.value[j - 1]);
  }
}

TEST_CASE("energy versus seminorm") {
  const ParamCurve c = circle_curve(0.5 / kPi);
  const EnergySeminormReport r = energy_vs_seminorm_report(c, power_phi(2.0), 1.0);
  CHECK(r.lp_power == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(r.lp_norm == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::isfinite(r.lhs));
  CHECK(std::isfinite(r.energy));
  const auto &q = r.ratio_by_cutoff;
  REQUIRE(q.size() >= 2);
  CHECK(q.back() == doctest::Approx(q[q.size() - 2]).epsilon(0.05));
  CHECK(r.ratio == doctest::Approx(q.back()).epsilon(0.05));

  FinitenessOptions opts;
  opts.energy_n_max = 512;
  const EnergySeminormReport t = energy_vs_seminorm_report(torus_knot(2, 3, 2.0, 1.0), power_phi(2.0), 1.0, opts);
  CHECK(std::isfinite(t.lhs));
  CHECK(std::isfinite(t.energy));
  CHECK(t.energy > 4.0);
  CHECK_THROWS_AS(energy_vs_seminorm_report(c, power_phi(3.5), 1.0, opts), NumericError);
}

TEST_CASE("seminorm is invariant under rotation") {
  const ParamCurve a = torus_knot(2, 3, 2.0, 1.0);
  const ParamCurve b = rotated_trefoil();
  for (double p : {1.0, 1.5}) {
    const double va = seminorm_cutoff(make_seminorm_job(a, power_phi(2.5), p), a.total_length() / 256.0);
    const double vb = seminorm_cutoff(make_seminorm_job(b, power_phi(2.5), p), b.total_length() / 256.0);
    CHECK(vb == doctest::Approx(va).epsilon(1e-8));
  }
}

TEST_CASE("job validation and CSV") {
  const ParamCurve fd("fd circle", 2, [](double t) {
    return Point{std::cos(2 * kPi * t), std::sin(2 * kPi * t)};
  });
  CHECK_THROWS_AS(seminorm_cutoff(make_seminorm_job(fd, power_phi(2.0), 1.0), 0.1), ValidationError);
  const ParamCurve unit = circle_curve(1.0);
  SeminormJob bad = make_seminorm_job(unit, power_phi(2.0), 1.0);
  bad.eps_ladder = {0.1, 0.2};
  CHECK_THROWS_AS(seminorm_ladder(bad), ValidationError);

  const FinitenessReport r = finiteness_diagnostic(circle_curve(1.0), power_phi(2.0), 1.0, {128, 3, {}});
  std::ostringstream os;
  write_finiteness_csv(os, r);
  const std::string s = os.str();
  CHECK(s.rfind("eps,seminorm_power,increment,classification\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 19);
  CHECK(s.find(",finite\n") != std::string::npos);
}

} // TEST_SUITE
