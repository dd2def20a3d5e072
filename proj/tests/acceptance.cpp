#include "ohara/curves.hpp"
#include "ohara/energy.hpp"
#include "ohara/experiments.hpp"
#include "ohara/phi.hpp"
#include "ohara/sobolev.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace ohara;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const double kAlphas[] = {2.0, 2.1, 2.3, 2.5, 2.7, 2.9};

// Published regular n-gon values, n = 4, 8, ..., 16384 per alpha column.
const double kTable2[13][6] = {
    {1, 1.147365, 1.500936, 1.949372, 2.516555, 3.232177},
    {2.325253, 2.739102, 3.780728, 5.187945, 7.085586, 9.640817},
    {3.134412, 3.754475, 5.372714, 7.672833, 10.95137, 15.64031},
    {3.562332, 4.320470, 6.363289, 9.408493, 13.99728, 20.99456},
    {3.780229, 4.626457, 6.969742, 10.61781, 16.42130, 25.87401},
    {3.889916, 4.790718, 7.341313, 11.46626, 18.37252, 30.38526},
    {3.944913, 4.878765, 7.569466, 12.06415, 19.95194, 34.58121},
    {3.972446, 4.925946, 7.709746, 12.48634, 21.23325, 38.49223},
    {3.986220, 4.951228, 7.796054, 12.78472, 22.27356, 42.14019},
    {3.993109, 4.964776, 7.849171, 12.99567, 23.11844, 45.54354},
    {3.996555, 4.972036, 7.881865, 13.14482, 23.80467, 48.71889},
    {3.998277, 4.975926, 7.901990, 13.25028, 24.36205, 51.68157},
    {3.999139, 4.978011, 7.914378, 13.32485, 24.81478, 54.44584},
};

const double kAnalytic[6] = {4, 4.980419, 7.934215, 13.50489, 26.77342, 92.95965};

// Expected alpha ranges at p = 1; lo/hi are the interval ends, infinity for
// unbounded, and an empty range is lo > hi.
struct ExpectedRange {
  const char *family;
  const char *set;
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;
};

const ExpectedRange kTable1[] = {
    {"power", "bilipschitz_premise", 2.0, kInf, true, false},
    {"power", "finiteness_set", 1.0, 3.0, false, false},
    {"power", "equivalence_set", 2.0, 3.0, true, false},
    {"powerlog", "bilipschitz_premise", 1.0, kInf, true, false},
    {"powerlog", "finiteness_set", 1.0, 2.0, false, false},
    {"powerlog", "equivalence_set", 2.0, 1.0, true, false},
    {"expfam", "bilipschitz_premise", 1.0, kInf, true, false},
    {"expfam", "finiteness_set", 1.0, 3.0, false, false},
    {"expfam", "equivalence_set", 2.0, 3.0, true, false},
};

constexpr double kGridStep = 0.05;
constexpr double kGridMax = 5.0;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char *f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

unsigned g_threads = 0;

EvalOptions eval(unsigned threads) { return EvalOptions{threads}; }

std::string table2_csv(unsigned threads) {
  ExperimentConfig cfg;
  cfg.eval = eval(threads);
  return run_table2(cfg).to_csv();
}

ExperimentConfig minimizer_config(unsigned threads) {
  ExperimentConfig cfg;
  cfg.alphas = {2.0, 2.5};
  cfg.n_values = {4, 5, 6, 8};
  cfg.trials = 200;
  cfg.seed = 1;
  cfg.eval = eval(threads);
  return cfg;
}

ExperimentConfig parity_config(unsigned threads) {
  ExperimentConfig cfg;
  cfg.alphas = {2.0};
  cfg.p = 30.0;
  cfg.n_values = {100};
  cfg.eval = eval(threads);
  return cfg;
}

Outcome criterion1() {
  ExperimentConfig cfg;
  cfg.eval = eval(g_threads);
  const ResultTable t = run_table2(cfg);
  double worst = 0.0;
  std::string where;
  std::size_t checked = 0;
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    if (t.text(r, "row") != "discrete")
      continue;
    const double a = *t.number(r, "alpha");
    const auto n = static_cast<std::size_t>(*t.number(r, "n"));
    const auto col = static_cast<std::size_t>(std::find(std::begin(kAlphas), std::end(kAlphas), a) - kAlphas);
    const auto row = static_cast<std::size_t>(std::log2(static_cast<double>(n))) - 2;
    const auto v = t.number(r, "value");
    const double err = v ? std::abs(*v - kTable2[row][col]) : kInf;
    ++checked;
    if (err > worst) {
      worst = err;
      where = "alpha=" + fmt("%g", a) + " n=" + std::to_string(n);
    }
  }
  const bool ok = checked == 78 && worst <= 5e-6;
  return {ok, std::to_string(checked) + " cells, max |diff| " + fmt("%.3e", worst) + " at " + where +
                  " (tol 5e-6)"};
}

Outcome criterion2() {
  double worst = 0.0;
  for (int k = 0; k < 6; ++k) {
    const double v = circle_energy_analytic(kAlphas[k], 1.0);
    worst = std::max(worst, std::abs(v - kAnalytic[k]) / kAnalytic[k]);
  }
  return {worst <= 5e-5, "max relative diff " + fmt("%.3e", worst) + " (tol 5e-5)"};
}

Outcome criterion3() {
  ExperimentConfig cfg;
  cfg.alphas = {2.0, 2.5};
  cfg.n_values = doubling_schedule(1024, 16384);
  cfg.eval = eval(g_threads);
  const ResultTable t = run_error_scaling(cfg);
  double lo = kInf, hi = -kInf;
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    if (const auto q = t.number(r, "theorem_ratio")) {
      lo = std::min(lo, *q);
      hi = std::max(hi, *q);
    }
  }
  return {lo >= 0.9 && hi <= 1.1,
          "successive ratios of n^(3-alpha)|E-E_n| in [" + fmt("%.6f", lo) + ", " + fmt("%.6f", hi) +
              "] (band [0.9, 1.1])"};
}

Outcome criterion4() {
  const EnergyParams p21(2.0, 1.0);
  const Polygon tri(2, {0.0, 0.0, 0.3, 0.1, 0.05, 0.4});
  const double e_tri = discrete_energy(tri, p21);
  const double e_tri2 = discrete_energy(tri, EnergyParams(2.7, 3.0));
  const double e_sq = discrete_energy(regular_polygon(4, 1.0), p21);
  const double e_rh = discrete_energy(rhombus_polygon(1.0 / 16.0), p21);
  const bool ok = e_tri == 0.0 && e_tri2 == 0.0 && std::abs(e_sq - 1.0) <= 1e-12 &&
                  std::abs(e_rh - 5.0 / 3.0) <= 1e-12;
  return {ok, "triangle " + fmt("%g", e_tri) + ", square |E-1| " + fmt("%.2e", std::abs(e_sq - 1.0)) +
                  ", rhombus |E-5/3| " + fmt("%.2e", std::abs(e_rh - 5.0 / 3.0)) + " (tol 1e-12)"};
}

Outcome criterion5() {
  double worst = 0.0;
  std::string where;
  for (const auto &[a, p] : {std::pair{2.0, 1.0}, {2.5, 1.0}, {2.0, 30.0}}) {
    const PairKernelF F = ohara_kernel(EnergyParams(a, p));
    for (std::size_t n = 3; n <= 256; ++n) {
      const double lb = regular_lower_bound(n, F);
      const double e = discrete_energy_general(regular_polygon(n, 1.0), F, eval(g_threads));
      const double rel = std::abs(lb - e) / std::max(1.0, std::abs(e));
      if (rel > worst) {
        worst = rel;
        where = "(" + fmt("%g", a) + "," + fmt("%g", p) + ") n=" + std::to_string(n);
      }
    }
  }
  return {worst <= 1e-12,
          "max |diff|/max(1,|E|) " + fmt("%.3e", worst) + (where.empty() ? "" : " at " + where) +
              " over n=3..256 (tol 1e-12)"};
}

Outcome criterion6() {
  const ResultTable t = run_minimizer_property(minimizer_config(g_threads));
  std::size_t trials = 0, below = 0, summaries = 0, accepted = 0;
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    const std::string kind = t.text(r, "kind");
    if (kind == "trial" || kind == "rhombus") {
      ++trials;
      if (t.number(r, "pass") != 1.0)
        ++below;
    }
    if (kind == "summary") {
      ++summaries;
      accepted += static_cast<std::size_t>(*t.number(r, "accepted"));
    }
  }
  return {summaries == 8 && below == 0,
          std::to_string(accepted) + " accepted random trials plus rhombi over 8 (n, alpha) cells, " +
              std::to_string(below) + " below the regular polygon"};
}

Outcome criterion7() {
  const ResultTable t = run_parity_study(parity_config(g_threads));
  double even = 0, pow2 = 0, odd = 0;
  for (std::size_t r = 0; r < t.rows().size(); ++r) {
    const std::string s = t.text(r, "series");
    if (s == "argmax_even")
      even = *t.number(r, "n");
    if (s == "argmax_pow2")
      pow2 = *t.number(r, "n");
    if (s == "odd_increasing")
      odd = *t.number(r, "value");
  }
  return {even == 20 && pow2 == 16 && odd == 1.0,
          "argmax even " + fmt("%g", even) + " (want 20), argmax pow2 " + fmt("%g", pow2) +
              " (want 16), odd increasing " + (odd == 1.0 ? "yes" : "no")};
}

std::string range_text(double lo, double hi) {
  if (lo > hi)
    return "empty";
  return "[" + fmt("%g", lo) + ", " + (std::isinf(hi) ? std::string("inf") : fmt("%g", hi)) + "]";
}

Outcome criterion8() {
  ExperimentConfig cfg;
  cfg.families = {"power", "powerlog", "expfam"};
  cfg.ps = {1.0};
  const ResultTable t = run_phi_report(cfg);
  std::size_t bad = 0;
  std::string detail;
  for (const auto &ex : kTable1) {
    std::vector<std::pair<double, double>> got;
    for (std::size_t r = 0; r < t.rows().size(); ++r)
      if (t.text(r, "kind") == "interval" && t.text(r, "family") == ex.family && t.text(r, "set") == ex.set)
        if (const auto lo = t.number(r, "lo"))
          got.emplace_back(*lo, *t.number(r, "hi"));

    bool ok;
    if (ex.lo > ex.hi) {
      ok = got.empty();
    } else {
      // Grid points of the expected range: first and last multiples of the step inside it.
      const double want_lo = ex.lo_closed ? ex.lo : ex.lo + kGridStep;
      const double want_hi = std::isinf(ex.hi) ? kGridMax : (ex.hi_closed ? ex.hi : ex.hi - kGridStep);
      ok = got.size() == 1 && std::abs(got[0].first - want_lo) <= kGridStep + 1e-9 &&
           std::abs(got[0].second - want_hi) <= kGridStep + 1e-9;
    }
    if (!ok) {
      ++bad;
      std::string g;
      for (const auto &[lo, hi] : got)
        g += (g.empty() ? "" : " ") + range_text(lo, hi);
      detail += std::string(detail.empty() ? "" : "; ") + ex.family + "/" + ex.set + " got " +
                (g.empty() ? "empty" : g) + " expected " + range_text(ex.lo, ex.hi);
    }
  }
  return {bad == 0, bad == 0 ? "9 cells match within one 0.05 grid step"
                             : std::to_string(bad) + " of 9 cells differ: " + detail};
}

Outcome criterion9() {
  const ParamCurve c = circle_curve(0.5 / std::numbers::pi);
  FinitenessOptions opts;
  opts.energy_n_max = 256;
  opts.energy_levels = 3;
  opts.eval = eval(g_threads);
  bool ok = true;
  std::string detail;
  for (double a : {2.0, 2.5, 2.9, 3.2, 3.5}) {
    const FinitenessReport r = finiteness_diagnostic(c, power_phi(a), 1.0, opts);
    const bool want_finite = a < 3.0;
    std::string cell = fmt("%g", a) + ":" + to_string(r.classification);
    if (want_finite) {
      ok = ok && r.classification == Finiteness::finite;
    } else {
      const double slope = r.divergence_exponent.value_or(kInf);
      const bool slope_ok = std::abs(slope - (a - 3.0)) <= 0.1 * (a - 3.0);
      ok = ok && r.classification == Finiteness::divergent && slope_ok;
      cell += " slope " + fmt("%.4f", slope);
    }
    detail += (detail.empty() ? "" : ", ") + cell;
  }
  return {ok, detail + " (slope tol 10% of alpha-3)"};
}

Outcome criterion10() {
  const unsigned many = g_threads > 1 ? g_threads : std::max(4u, resolve_threads(0));
  std::size_t differ = 0;
  std::string detail;
  const std::pair<const char *, std::function<std::string(unsigned)>> runs[] = {
      {"table2", table2_csv},
      {"minimizer", [](unsigned th) { return run_minimizer_property(minimizer_config(th)).to_csv(); }},
      {"parity", [](unsigned th) { return run_parity_study(parity_config(th)).to_csv(); }},
  };
  for (const auto &[name, run] : runs) {
    const std::string one = run(1);
    const std::string n = run(many);
    const bool same = one == n;
    differ += same ? 0 : 1;
    detail += std::string(detail.empty() ? "" : ", ") + name + " " + std::to_string(one.size()) + " bytes " +
              (same ? "identical" : "DIFFER");
  }
  return {differ == 0, detail + " (1 vs " + std::to_string(many) + " threads)"};
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 10));
  app.add_option("--threads", g_threads, "worker threads (0 = all cores)");
  CLI11_PARSE(app, argc, argv);

  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                               criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0;
  for (int k = 1; k <= 10; ++k) {
    if (only != 0 && only != k)
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[k - 1]();
    } catch (const std::exception &e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", k, out.detail.c_str(), secs);
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
