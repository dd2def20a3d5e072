#include "ohara/phi.hpp"

#include "ohara/error.hpp"
#include "ohara/io.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

namespace ohara {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kLn10 = std::numbers::ln10;
constexpr int kLadderLevels = 6;
constexpr double kRatioTol = 1e-6;
constexpr double kSlopeTol = 1e-6;

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ValidationError("Phi family exponent alpha must be positive and finite");
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  std::vector<double> g(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  return g;
}

// Integral over u of f(u) on the lower-limit ladder log a - 2 j ln 10,
// j = 1..6. Segments are split at u = 0 where comparison functions switch
// branches.
LadderIntegral ladder_integral(const std::function<double(double)> &f, double a) {
  auto segment = [&](double u0, double u1) {
    auto piece = [&](double lo, double hi) {
      return gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, 1e-12);
    };
    if (u0 < 0.0 && 0.0 < u1)
      return piece(u0, 0.0) + piece(0.0, u1);
    return piece(u0, u1);
  };

  LadderIntegral out;
  std::vector<double> inc;
  double upper = std::log(a);
  double total = 0.0;
  for (int j = 1; j <= kLadderLevels; ++j) {
    const double lower = std::log(a) - 2.0 * kLn10 * j;
    const double d = segment(lower, upper);
    total += d;
    inc.push_back(d);
    out.ladder.push_back(total);
    upper = lower;
  }

  if (!std::isfinite(total)) {
    out.status = LadderIntegral::Status::divergent;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  if (std::any_of(inc.begin(), inc.end(), [](double d) { return d < 0.0; })) {
    out.status = LadderIntegral::Status::inconclusive;
    out.value = total;
    return out;
  }
  const double last = inc[kLadderLevels - 1];
  const double prev = inc[kLadderLevels - 2];
  const double prev2 = inc[kLadderLevels - 3];
  if (last == 0.0) {
    out.status = LadderIntegral::Status::finite;
    out.value = total;
    return out;
  }
  const double rho = last / prev;
  const double rho_prev = prev / prev2;
  out.tail_ratio = rho;
  const bool grows = rho >= 1.0 - kRatioTol;
  if (grows != (rho_prev >= 1.0 - kRatioTol)) {
    out.status = LadderIntegral::Status::inconclusive;
    out.value = total;
  } else if (grows) {
    out.status = LadderIntegral::Status::divergent;
    out.value = std::numeric_limits<double>::infinity();
  } else {
    out.status = LadderIntegral::Status::finite;
    out.value = total + last * rho / (1.0 - rho);
  }
  return out;
}

// d log(f(x)) / d log(x) between two sample points.
double log_slope(const std::function<double(double)> &f, double x0, double x1) {
  return (std::log(f(x1)) - std::log(f(x0))) / (std::log(x1) - std::log(x0));
}

Verdict from_status(LadderIntegral::Status s) {
  switch (s) {
  case LadderIntegral::Status::finite:
    return Verdict::hold;
  case LadderIntegral::Status::divergent:
    return Verdict::fail;
  default:
    return Verdict::inconclusive;
  }
}

} // namespace

PhiSpec power_phi(double alpha) {
  require_alpha(alpha);
  PhiSpec s;
  s.name = "power:alpha=" + format_short(alpha);
  s.family = PhiFamily::power;
  s.alpha = alpha;
  s.phi = [alpha](double x) { return std::pow(x, alpha); };
  s.dphi = [alpha](double x) { return alpha * std::pow(x, alpha - 1.0); };
  s.comparison = [alpha](double k) { return std::pow(k, alpha); };
  return s;
}

PhiSpec powerlog_phi(double alpha) {
  require_alpha(alpha);
  PhiSpec s;
  s.name = "powerlog:alpha=" + format_short(alpha);
  s.family = PhiFamily::powerlog;
  s.alpha = alpha;
  s.phi = [alpha](double x) { return std::pow(x, alpha) * std::log1p(x); };
  s.dphi = [alpha](double x) {
    return alpha * std::pow(x, alpha - 1.0) * std::log1p(x) + std::pow(x, alpha) / (1.0 + x);
  };
  s.comparison = [alpha](double k) { return k < 1.0 ? std::pow(k, alpha) : std::pow(k, alpha + 1.0); };
  return s;
}

PhiSpec expfam_phi(double alpha) {
  require_alpha(alpha);
  PhiSpec s;
  s.name = "expfam:alpha=" + format_short(alpha);
  s.family = PhiFamily::expfam;
  s.alpha = alpha;
  s.phi = [alpha](double x) {
    const double t = std::pow(x, alpha);
    return -std::expm1(-t) + 0.5 * t * t;
  };
  s.dphi = [alpha](double x) {
    const double t = std::pow(x, alpha);
    return alpha * std::pow(x, alpha - 1.0) * (std::exp(-t) + t);
  };
  s.comparison = [alpha](double k) {
    return k < 1.0 ? std::pow(k, alpha) : std::pow(k, 2.0 * alpha);
  };
  return s;
}

double derivative_consistency(const PhiSpec &phi) {
  double worst = 0.0;
  for (double x : log_grid(1e-12, 1e2, 29)) {
    const double h = 1e-5 * x;
    const double fd = (phi(x + h) - phi(x - h)) / (2.0 * h);
    const double d = phi.dphi(x);
    const double rel = std::abs(fd - d) / std::max(std::abs(d), std::numeric_limits<double>::min());
    worst = std::max(worst, std::isfinite(rel) ? rel : std::numeric_limits<double>::infinity());
  }
  return worst;
}

PhiSpec custom_phi(std::string name, PhiSpec::Fn phi, PhiSpec::Fn dphi,
                   std::optional<PhiSpec::Fn> comparison) {
  if (!phi || !dphi)
    throw ValidationError("custom Phi needs both phi and dphi");
  PhiSpec s;
  s.name = std::move(name);
  s.family = PhiFamily::custom;
  s.phi = std::move(phi);
  s.dphi = std::move(dphi);
  s.comparison = std::move(comparison);
  if (s.phi(0.0) != 0.0)
    throw ValidationError("Phi(0) must be 0");
  if (derivative_consistency(s) > 1e-6)
    throw ValidationError("Phi' disagrees with finite differences of Phi");
  return s;
}

PhiSpec make_phi(const std::string &family, double alpha) {
  if (family == "power")
    return power_phi(alpha);
  if (family == "powerlog")
    return powerlog_phi(alpha);
  if (family == "expfam")
    return expfam_phi(alpha);
  throw ValidationError("unknown Phi family '" + family + "' (expected power, powerlog or expfam)");
}

PhiSpec parse_phi_spec(const std::string &spec) {
  const SpecString s = parse_spec_string(spec);
  return make_phi(s.name, s.get("alpha"));
}

double G_value(const PhiSpec &phi, double x) {
  if (!(x > 0.0))
    throw ValidationError("G requires x > 0");
  const double v = phi(x);
  if (!(v > 0.0))
    throw ValidationError("Phi(x) = 0 at x = " + format_double(x));
  return x * phi.dphi(x) / v;
}

LimitEstimate limit_K(const PhiSpec &phi, double x0, int levels) {
  if (!(x0 > 0.0))
    throw ValidationError("limit_K requires x0 > 0");
  if (levels < 8)
    throw ValidationError("limit_K requires at least 8 levels");
  LimitEstimate est;
  for (int j = 0; j <= levels; ++j) {
    const double g = G_value(phi, std::ldexp(x0, -j));
    if (!std::isfinite(g))
      throw NumericError("G not finite at x = " + format_double(std::ldexp(x0, -j)));
    est.samples.push_back(g);
  }
  const auto tail = std::span(est.samples).last(3);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  est.K = est.samples.back();
  est.converged = *hi - *lo <= 1e-6 * std::abs(est.K);
  return est;
}

double psi_value(const PhiSpec &phi, double p, double x) {
  if (!(x > 0.0))
    throw ValidationError("Psi requires x > 0");
  if (!(p > 0.0))
    throw ValidationError("Psi requires p > 0");
  return std::sqrt(phi(x) / std::pow(x, 1.0 / p));
}

std::string to_string(LadderIntegral::Status status) {
  switch (status) {
  case LadderIntegral::Status::finite:
    return "finite";
  case LadderIntegral::Status::divergent:
    return "divergent";
  default:
    return "inconclusive";
  }
}

LadderIntegral M_integral(const PhiSpec &phi, double p, double a) {
  if (!phi.comparison)
    throw ValidationError("M requires a comparison function phi");
  if (!(a > 0.0))
    throw ValidationError("M requires a > 0");
  const auto &cmp = *phi.comparison;
  // dt / t = du with t = e^u.
  return ladder_integral(
      [&](double u) {
        const double v = cmp(std::exp(u));
        if (!std::isfinite(v))
          throw NumericError("comparison function not finite at t = " + format_double(std::exp(u)));
        return std::pow(v, p);
      },
      a);
}

LadderIntegral A3_integral(const PhiSpec &phi, double p, double a) {
  if (!(a > 0.0))
    throw ValidationError("integral requires a > 0");
  return ladder_integral(
      [&](double u) { return std::exp((2.0 * p + 1.0) * u - p * std::log(phi(std::exp(u)))); }, a);
}

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::hold:
    return "hold";
  case Verdict::fail:
    return "fail";
  default:
    return "inconclusive";
  }
}

Verdict all_of(std::initializer_list<Verdict> verdicts) {
  Verdict out = Verdict::hold;
  for (Verdict v : verdicts) {
    if (v == Verdict::fail)
      return Verdict::fail;
    if (v == Verdict::inconclusive)
      out = Verdict::inconclusive;
  }
  return out;
}

Verdict AssumptionReport::finiteness_set() const { return all_of({a0, a1, a2_1, a2_2, a2_3, a3}); }

Verdict AssumptionReport::equivalence_set() const {
  return all_of({a0, a1, a2_1, a2_2_prime, a2_3, a3});
}

AssumptionReport check_assumptions(const PhiSpec &phi, double p) {
  if (!(p > 0.0))
    throw ValidationError("p must be positive");
  AssumptionReport r;
  const double two_over_p = 2.0 / p;

  // (A0): Phi(0) = 0, Phi' > 0, Phi increasing on the sampling grid.
  {
    bool ok = phi(0.0) == 0.0;
    double prev = 0.0;
    for (double x : log_grid(1e-12, 1e2, 200)) {
      const double v = phi(x);
      ok = ok && phi.dphi(x) > 0.0 && v > prev;
      prev = v;
    }
    r.a0 = ok ? Verdict::hold : Verdict::fail;
  }

  // (A1): G(x) -> K > 0.
  try {
    const LimitEstimate k = limit_K(phi, 1.0, 40);
    r.K = k.K;
    r.a1 = !k.converged ? Verdict::inconclusive : (k.K > 0.0 ? Verdict::hold : Verdict::fail);
  } catch (const std::exception &) {
    r.a1 = Verdict::inconclusive;
  }

  auto slope_verdict = [](double s0, double s1, auto pred) {
    const bool a = pred(s0), b = pred(s1);
    if (a != b)
      return Verdict::inconclusive;
    return a ? Verdict::hold : Verdict::fail;
  };

  // Bi-Lipschitz premise: Phi(x) / x^(2/p) bounded as x -> +0.
  {
    auto ratio = [&](double x) { return phi(x) / std::pow(x, two_over_p); };
    const double s0 = log_slope(ratio, 1e-8, 1e-10);
    const double s1 = log_slope(ratio, 1e-10, 1e-12);
    r.bilipschitz_premise =
        all_of({r.a0, slope_verdict(s0, s1, [](double s) { return s >= -kSlopeTol; })});
  }

  // (A3)
  r.a3 = from_status(A3_integral(phi, p, 1.0).status);

  if (!phi.comparison)
    return r;
  const auto &cmp = *phi.comparison;

  // (A2-1): Phi(kx) <= phi(k) Phi(x) on a (k, x) grid.
  {
    bool ok = true;
    const auto xs = log_grid(1e-12, 1e2, 57);
    for (double k : log_grid(1e-6, 1e6, 49)) {
      const double c = cmp(k);
      for (double x : xs)
        ok = ok && phi(k * x) <= c * phi(x) * (1.0 + 1e-9);
    }
    r.a2_1 = ok ? Verdict::hold : Verdict::fail;
  }

  // (A2-2): M(eps) / eps -> 0.
  {
    const double eps[] = {1e-2, 1e-4, 1e-6};
    double ratio[3];
    Verdict v = Verdict::hold;
    for (int i = 0; i < 3; ++i) {
      const LadderIntegral m = M_integral(phi, p, eps[i]);
      v = all_of({v, from_status(m.status)});
      ratio[i] = m.value / eps[i];
    }
    if (v == Verdict::hold) {
      auto slope = [&](int i, int j) {
        return (std::log(ratio[j]) - std::log(ratio[i])) / (std::log(eps[j]) - std::log(eps[i]));
      };
      v = slope_verdict(slope(0, 1), slope(1, 2), [](double s) { return s > kSlopeTol; });
    }
    r.a2_2 = v;
  }

  // (A2-3): M(a) finite.
  r.a2_3 = all_of({from_status(M_integral(phi, p, 1.0).status),
                   from_status(M_integral(phi, p, 100.0).status)});

  // (A2-2)': phi(x) / x^(2/p) bounded, tested as x -> +0 and, for the
  // record, as x -> infinity.
  {
    auto ratio = [&](double x) { return cmp(x) / std::pow(x, two_over_p); };
    r.a2_2_prime = slope_verdict(log_slope(ratio, 1e-8, 1e-10), log_slope(ratio, 1e-10, 1e-12),
                                 [](double s) { return s >= -kSlopeTol; });
    r.a2_2_prime_at_infinity = slope_verdict(log_slope(ratio, 1e4, 1e6), log_slope(ratio, 1e6, 1e8),
                                             [](double s) { return s <= kSlopeTol; });
  }
  return r;
}

} // namespace ohara
