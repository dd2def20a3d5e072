#include "ohara/experiments.hpp"

#include "ohara/curves.hpp"
#include "ohara/energy.hpp"
#include "ohara/error.hpp"
#include "ohara/io.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ohara {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string csv_escape(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

long long as_cell(std::size_t n) { return static_cast<long long>(n); }

std::vector<std::size_t> schedule_or(const ExperimentConfig &config, std::vector<std::size_t> fallback) {
  std::vector<std::size_t> ns = config.n_values.empty() ? std::move(fallback) : config.n_values;
  validate_schedule(ns);
  return ns;
}

std::vector<double> alphas_or(const ExperimentConfig &config, std::vector<double> fallback) {
  std::vector<double> a = config.alphas.empty() ? std::move(fallback) : config.alphas;
  for (double x : a)
    if (!(x > 0.0) || !std::isfinite(x))
      throw ValidationError("alpha values must be positive");
  return a;
}

} // namespace

std::vector<std::size_t> doubling_schedule(std::size_t n_min, std::size_t n_max) {
  if (n_min < 3)
    throw ValidationError("schedule must start at n >= 3");
  if (n_max < n_min)
    throw ValidationError("schedule upper bound below lower bound");
  std::vector<std::size_t> out;
  for (std::size_t n = n_min; n <= n_max; n *= 2)
    out.push_back(n);
  return out;
}

void validate_schedule(const std::vector<std::size_t> &n_values) {
  if (n_values.empty())
    throw ValidationError("n schedule is empty");
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    if (n_values[k] < 3)
      throw ValidationError("every n in the schedule must be >= 3");
    if (k > 0 && n_values[k] <= n_values[k - 1])
      throw ValidationError("n schedule must be strictly increasing");
  }
}

ResultTable::ResultTable(std::string experiment, std::vector<std::string> columns)
    : experiment_(std::move(experiment)), columns_(std::move(columns)) {}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw std::logic_error("row width does not match the table header");
  rows_.push_back(std::move(row));
}

std::size_t ResultTable::column(const std::string &name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end())
    throw std::out_of_range("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns_.begin());
}

std::optional<double> ResultTable::number(std::size_t row, const std::string &name) const {
  const Cell &c = rows_.at(row)[column(name)];
  if (const auto *d = std::get_if<double>(&c))
    return *d;
  if (const auto *i = std::get_if<long long>(&c))
    return static_cast<double>(*i);
  return std::nullopt;
}

std::string ResultTable::text(std::size_t row, const std::string &name) const {
  const Cell &c = rows_.at(row)[column(name)];
  if (const auto *s = std::get_if<std::string>(&c))
    return *s;
  return {};
}

void ResultTable::write_csv(std::ostream &out) const {
  for (std::size_t c = 0; c < columns_.size(); ++c)
    out << (c ? "," : "") << columns_[c];
  out << '\n';
  for (const auto &row : rows_) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c)
        out << ',';
      std::visit(
          [&out](const auto &v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
              out << format_double(v);
            else if constexpr (std::is_same_v<T, long long>)
              out << v;
            else if constexpr (std::is_same_v<T, std::string>)
              out << csv_escape(v);
          },
          row[c]);
    }
    out << '\n';
  }
}

std::string ResultTable::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

ResultTable run_table2(const ExperimentConfig &config) {
  const auto alphas = alphas_or(config, {2.0, 2.1, 2.3, 2.5, 2.7, 2.9});
  const auto ns = schedule_or(config, doubling_schedule(4, 16384));
  const double p = config.p;
  ResultTable t("table2", {"experiment", "row", "alpha", "p", "n", "value", "status", "provenance"});

  for (double a : alphas) {
    const EnergyParams params(a, p);
    std::optional<double> last;
    std::size_t last_n = 0;
    for (std::size_t n : ns) {
      try {
        const double e = scale_invariant_energy(regular_polygon(n, 1.0), params, config.eval);
        t.add_row({"table2", "discrete", a, p, as_cell(n), e, "ok",
                   "scale_invariant_energy(regular_polygon(n,1))"});
        last = e;
        last_n = n;
      } catch (const NumericError &err) {
        t.add_row({"table2", "discrete", a, p, as_cell(n), {}, std::string("error: ") + err.what(),
                   "scale_invariant_energy(regular_polygon(n,1))"});
      }
    }
    std::optional<double> analytic;
    if (p == 1.0 && a >= 2.0 && a < 3.0) {
      analytic = circle_energy_analytic(a, 1.0);
      t.add_row({"table2", "analytic", a, p, {}, *analytic, "ok", "circle_energy_analytic(alpha,1)"});
    } else {
      t.add_row({"table2", "analytic", a, p, {}, {}, "unavailable: requires p = 1 and 2 <= alpha < 3",
                 "circle_energy_analytic(alpha,1)"});
    }
    if (analytic && last)
      t.add_row({"table2", "ratio", a, p, as_cell(last_n), *last / *analytic, "ok",
                 "discrete(n_max)/analytic"});
  }
  return t;
}

ResultTable run_error_scaling(const ExperimentConfig &config) {
  if (config.p != 1.0)
    throw ValidationError("error scaling requires p = 1");
  const auto alphas = alphas_or(config, {2.0});
  const auto ns = schedule_or(config, doubling_schedule(4, 4096));
  ResultTable t("errscale", {"experiment", "alpha", "p", "n", "energy", "analytic", "raw_error",
                             "e_alpha", "theorem_scaled", "e_alpha_ratio", "theorem_ratio",
                             "e_alpha_stable", "theorem_stable", "provenance"});
  for (double a : alphas) {
    const EnergyParams params(a, 1.0);
    const double exact = circle_energy_analytic(a, 1.0);
    std::optional<double> prev_e, prev_t;
    for (std::size_t n : ns) {
      const double e = scale_invariant_energy(regular_polygon(n, 1.0), params, config.eval);
      const double err = std::abs(exact - e);
      const double nn = static_cast<double>(n);
      const double e_alpha = std::pow(nn, a - 2.0) * err;
      const double scaled = std::pow(nn, 3.0 - a) * err;
      Cell re, rt, se, st;
      if (prev_e && prev_t) {
        const double r1 = e_alpha / *prev_e;
        const double r2 = scaled / *prev_t;
        re = r1;
        rt = r2;
        se = as_cell(r1 >= 0.9 && r1 <= 1.1 ? 1 : 0);
        st = as_cell(r2 >= 0.9 && r2 <= 1.1 ? 1 : 0);
      }
      t.add_row({"errscale", a, 1.0, as_cell(n), e, exact, err, e_alpha, scaled, re, rt, se, st,
                 "scale_invariant_energy(regular_polygon(n,1)); circle_energy_analytic(alpha,1)"});
      prev_e = e_alpha;
      prev_t = scaled;
    }
  }
  return t;
}

ResultTable run_parity_study(const ExperimentConfig &config) {
  const auto alphas = alphas_or(config, {2.0});
  if (alphas.size() != 1)
    throw ValidationError("parity study takes a single alpha");
  const double a = alphas.front();
  const double p = config.p;
  const EnergyParams params(a, p);
  const std::size_t n_max = config.n_values.empty() ? 100 : config.n_values.back();
  if (n_max < 5)
    throw ValidationError("parity study needs n_max >= 5");

  ResultTable t("parity", {"experiment", "series", "alpha", "p", "n", "value", "provenance"});
  const std::string prov = "scale_invariant_energy(regular_polygon(n,1))";
  auto energy = [&](std::size_t n) {
    return scale_invariant_energy(regular_polygon(n, 1.0), params, config.eval);
  };

  std::size_t even_arg = 0, pow2_arg = 0;
  double even_best = -1.0, pow2_best = -1.0;
  for (std::size_t n = 4; n <= n_max; n += 2) {
    const double e = energy(n);
    t.add_row({"parity", "even", a, p, as_cell(n), e, prov});
    if (e > even_best) {
      even_best = e;
      even_arg = n;
    }
  }
  bool odd_increasing = true;
  double odd_prev = -1.0;
  for (std::size_t n = 5; n <= n_max; n += 2) {
    const double e = energy(n);
    t.add_row({"parity", "odd", a, p, as_cell(n), e, prov});
    if (odd_prev >= 0.0 && !(e > odd_prev))
      odd_increasing = false;
    odd_prev = e;
  }
  for (std::size_t n = 4; n <= n_max; n *= 2) {
    const double e = energy(n);
    t.add_row({"parity", "pow2", a, p, as_cell(n), e, prov});
    if (e > pow2_best) {
      pow2_best = e;
      pow2_arg = n;
    }
  }
  t.add_row({"parity", "argmax_even", a, p, as_cell(even_arg), even_best, "max over even series"});
  t.add_row({"parity", "argmax_pow2", a, p, as_cell(pow2_arg), pow2_best, "max over pow2 series"});
  t.add_row({"parity", "odd_increasing", a, p, {}, odd_increasing ? 1.0 : 0.0,
             "strict increase over odd series n >= 5"});
  return t;
}

EquilateralSample random_equilateral_polygon(std::size_t n, double sigma, std::mt19937_64 &rng) {
  if (n < 3)
    throw ValidationError("equilateral polygon needs n >= 3");
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> ex(n), ey(n);
  double heading = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ex[k] = std::cos(heading);
    ey[k] = std::sin(heading);
    heading += kTwoPi / static_cast<double>(n) + sigma * noise(rng);
  }

  EquilateralSample out;
  for (std::size_t iter = 0; iter < 10000; ++iter) {
    double dx = 0.0, dy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      dx += ex[k];
      dy += ey[k];
    }
    out.closure_defect = std::hypot(dx, dy);
    out.closure_iterations = iter;
    if (out.closure_defect < 1e-10)
      break;
    dx /= static_cast<double>(n);
    dy /= static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      ex[k] -= dx;
      ey[k] -= dy;
      const double len = std::hypot(ex[k], ey[k]);
      if (!(len > 0.0))
        return out;
      ex[k] /= len;
      ey[k] /= len;
    }
  }
  if (!(out.closure_defect < 1e-10))
    return out;

  const double inv = 1.0 / static_cast<double>(n);
  std::vector<double> coords(2 * n);
  double x = 0.0, y = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    coords[2 * k] = x;
    coords[2 * k + 1] = y;
    x += ex[k] * inv;
    y += ey[k] * inv;
  }
  Polygon poly(2, std::move(coords));
  if (!validate_embedded(poly, 1e-9).ok)
    return out;

  double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = (k + 1) % n;
    const double turn = std::atan2(ex[k] * ey[m] - ey[k] * ex[m], ex[k] * ex[m] + ey[k] * ey[m]);
    tmin = std::min(tmin, turn);
    tmax = std::max(tmax, turn);
  }
  out.regular = tmax - tmin <= 1e-9;
  out.polygon = std::move(poly);
  return out;
}

Polygon rhombus_polygon(double t) {
  if (!(std::abs(t) < 0.125))
    throw ValidationError("rhombus parameter must satisfy |t| < 1/8");
  const double d1 = std::sqrt(0.125 + t);
  const double d2 = std::sqrt(0.125 - t);
  return Polygon(2, {0.5 * d1, 0.0, 0.0, 0.5 * d2, -0.5 * d1, 0.0, 0.0, -0.5 * d2});
}

ResultTable run_minimizer_property(const ExperimentConfig &config) {
  const auto alphas = alphas_or(config, {2.0, 2.5});
  const auto ns = schedule_or(config, {4, 5, 6, 8});
  const double p = config.p;
  if (!(config.perturbation > 0.0))
    throw ValidationError("perturbation scale must be positive");

  ResultTable t("minimizer", {"experiment", "kind", "n", "alpha", "p", "seed", "trial", "parameter",
                              "value", "regular_value", "excess", "accepted", "skipped", "pass",
                              "provenance"});
  const std::string prov = "scale_invariant_energy";
  const auto seed = static_cast<long long>(config.seed);

  for (std::size_t n : ns) {
    for (double a : alphas) {
      const EnergyParams params(a, p);
      const double regular = scale_invariant_energy(regular_polygon(n, 1.0), params, config.eval);
      t.add_row({"minimizer", "regular", as_cell(n), a, p, seed, {}, {}, regular, regular, 0.0, {}, {},
                 {}, "scale_invariant_energy(regular_polygon(n,1))"});

      // One stream per (n, alpha) so cells are reproducible in isolation.
      std::seed_seq seq{static_cast<std::uint64_t>(config.seed), static_cast<std::uint64_t>(n),
                        static_cast<std::uint64_t>(std::llround(a * 1e6))};
      std::mt19937_64 rng(seq);
      std::size_t accepted = 0, skipped = 0, violations = 0;
      double min_value = std::numeric_limits<double>::infinity();
      for (std::size_t trial = 0; trial < config.trials; ++trial) {
        const EquilateralSample s = random_equilateral_polygon(n, config.perturbation, rng);
        if (!s.polygon) {
          ++skipped;
          continue;
        }
        ++accepted;
        const double e = scale_invariant_energy(*s.polygon, params, config.eval);
        const bool ok = s.regular ? e >= regular - 1e-12 * regular : e > regular;
        if (!ok)
          ++violations;
        min_value = std::min(min_value, e);
        t.add_row({"minimizer", "trial", as_cell(n), a, p, seed, as_cell(trial), config.perturbation, e,
                   regular, e - regular, {}, {}, as_cell(ok ? 1 : 0), prov});
      }
      if (n == 4) {
        for (double rt : {0.0, 1.0 / 32.0, 1.0 / 16.0, 3.0 / 32.0}) {
          const double e = scale_invariant_energy(rhombus_polygon(rt), params, config.eval);
          const bool ok = rt == 0.0 ? std::abs(e - regular) <= 1e-12 * regular : e > regular;
          if (!ok)
            ++violations;
          t.add_row({"minimizer", "rhombus", as_cell(n), a, p, seed, {}, rt, e, regular, e - regular,
                     {}, {}, as_cell(ok ? 1 : 0), "scale_invariant_energy(rhombus_polygon(t))"});
        }
      }
      t.add_row({"minimizer", "summary", as_cell(n), a, p, seed, {}, config.perturbation,
                 accepted ? Cell(min_value) : Cell{}, regular,
                 accepted ? Cell(min_value - regular) : Cell{}, as_cell(accepted), as_cell(skipped),
                 as_cell(violations == 0 ? 1 : 0), "min over accepted trials"});
    }
  }
  return t;
}

std::vector<AlphaInterval> detect_intervals(const std::vector<double> &alphas,
                                            const std::vector<Verdict> &verdicts) {
  if (alphas.size() != verdicts.size())
    throw ValidationError("alpha grid and verdicts differ in length");
  std::vector<AlphaInterval> out;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (verdicts[i] != Verdict::hold)
      continue;
    if (i > 0 && verdicts[i - 1] == Verdict::hold)
      out.back().hi = alphas[i];
    else
      out.push_back({alphas[i], alphas[i]});
  }
  return out;
}

ResultTable run_phi_report(const ExperimentConfig &config) {
  const std::vector<std::string> families =
      config.families.empty() ? std::vector<std::string>{"power", "powerlog", "expfam"} : config.families;
  const std::vector<double> ps = config.ps.empty() ? std::vector<double>{1.0, 2.0} : config.ps;
  std::vector<double> alphas;
  for (int k = 1; k <= 100; ++k)
    alphas.push_back(k / 20.0);

  ResultTable t("phi-report",
                {"experiment", "kind", "family", "p", "alpha", "A0", "A1", "A2-1", "A2-2", "A2-3",
                 "A2-2prime", "A2-2prime_infinity", "A3", "K", "bilipschitz_premise", "finiteness_set",
                 "equivalence_set", "set", "lo", "hi", "provenance"});

  for (const auto &family : families) {
    for (double p : ps) {
      std::vector<Verdict> premise, finite, equiv;
      for (double a : alphas) {
        const AssumptionReport r = check_assumptions(make_phi(family, a), p);
        premise.push_back(r.bilipschitz_premise);
        finite.push_back(r.finiteness_set());
        equiv.push_back(r.equivalence_set());
        t.add_row({"phi-report", "verdict", family, p, a, to_string(r.a0), to_string(r.a1),
                   to_string(r.a2_1), to_string(r.a2_2), to_string(r.a2_3), to_string(r.a2_2_prime),
                   to_string(r.a2_2_prime_at_infinity), to_string(r.a3), r.K,
                   to_string(r.bilipschitz_premise), to_string(r.finiteness_set()),
                   to_string(r.equivalence_set()), {}, {}, {}, "check_assumptions"});
      }
      const std::pair<const char *, const std::vector<Verdict> *> sets[] = {
          {"bilipschitz_premise", &premise}, {"finiteness_set", &finite}, {"equivalence_set", &equiv}};
      for (const auto &[name, verdicts] : sets) {
        const auto runs = detect_intervals(alphas, *verdicts);
        if (runs.empty())
          t.add_row({"phi-report", "interval", family, p, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {},
                     std::string(name), {}, {}, "detect_intervals"});
        for (const auto &run : runs)
          t.add_row({"phi-report", "interval", family, p, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}, {},
                     std::string(name), run.lo, run.hi, "detect_intervals"});
      }
    }
  }
  return t;
}

} // namespace ohara
