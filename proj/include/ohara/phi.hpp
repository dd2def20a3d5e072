#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ohara {

enum class PhiFamily { power, powerlog, expfam, custom };

/// A function Phi : [0, inf) -> [0, inf) together with its derivative and an
/// optional comparison function phi with Phi(kx) <= phi(k) Phi(x).
struct PhiSpec {
  using Fn = std::function<double(double)>;

  std::string name;
  PhiFamily family = PhiFamily::custom;
  double alpha = 0.0;  // family exponent; unused for custom families
  Fn phi;
  Fn dphi;
  std::optional<Fn> comparison;

  double operator()(double x) const { return phi(x); }
};

/// x^alpha, comparison k^alpha.
PhiSpec power_phi(double alpha);
/// x^alpha log(1 + x), comparison k^alpha (k < 1), k^(alpha + 1) (k >= 1).
PhiSpec powerlog_phi(double alpha);
/// 1 - exp(-x^alpha) + x^(2 alpha) / 2, comparison k^alpha (k < 1),
/// k^(2 alpha) (k >= 1).
PhiSpec expfam_phi(double alpha);

/// Builds a user family. Throws ValidationError if dphi disagrees with
/// central differences of phi on the log grid or Phi(0) != 0.
PhiSpec custom_phi(std::string name, PhiSpec::Fn phi, PhiSpec::Fn dphi,
                   std::optional<PhiSpec::Fn> comparison = {});

/// Family by name ("power", "powerlog", "expfam") and exponent.
PhiSpec make_phi(const std::string &family, double alpha);

/// Parses `power:alpha=2.5`, `powerlog:alpha=2`, `expfam:alpha=1.5`.
PhiSpec parse_phi_spec(const std::string &spec);

/// Checks dphi against central differences of phi (relative 1e-6) on a log
/// grid over [1e-12, 1e2]. Returns the worst relative deviation.
double derivative_consistency(const PhiSpec &phi);

/// G(x) = x Phi'(x) / Phi(x).
double G_value(const PhiSpec &phi, double x);

struct LimitEstimate {
  double K = 0.0;
  bool converged = false;
  std::vector<double> samples;  // G(x0 2^-j), j = 0..levels
};

/// G on x_j = x0 2^-j; converged when the last three samples agree within
/// 1e-6 relative.
LimitEstimate limit_K(const PhiSpec &phi, double x0 = 1.0, int levels = 40);

/// Psi(x) = (Phi(x) / x^(1/p))^(1/2).
double psi_value(const PhiSpec &phi, double p, double x);

/// Outcome of an improper integral evaluated on a ladder of lower limits
/// a 10^-2, a 10^-4, ..., a 10^-12.
struct LadderIntegral {
  enum class Status { finite, divergent, inconclusive };
  Status status = Status::inconclusive;
  double value = 0.0;          // geometric-tail extrapolated value when finite
  double tail_ratio = 0.0;     // ratio of the last two ladder increments
  std::vector<double> ladder;  // partial integrals, one per lower limit
};

std::string to_string(LadderIntegral::Status status);

/// M(a) = int_0^a phi(t)^p / t dt with phi the comparison function.
/// Throws ValidationError if the family has no comparison function.
LadderIntegral M_integral(const PhiSpec &phi, double p, double a);

/// int_0^a t^(2p) / Phi(t)^p dt.
LadderIntegral A3_integral(const PhiSpec &phi, double p, double a);

enum class Verdict { hold, fail, inconclusive };

std::string to_string(Verdict v);

/// Conjunction: fail dominates, then inconclusive.
Verdict all_of(std::initializer_list<Verdict> verdicts);

struct AssumptionReport {
  Verdict a0 = Verdict::inconclusive;
  Verdict a1 = Verdict::inconclusive;
  Verdict a2_1 = Verdict::inconclusive;
  Verdict a2_2 = Verdict::inconclusive;
  Verdict a2_3 = Verdict::inconclusive;
  /// phi(x) = O(x^(2/p)) tested as x -> +0.
  Verdict a2_2_prime = Verdict::inconclusive;
  /// phi(x) = O(x^(2/p)) tested literally as x -> infinity; informational.
  Verdict a2_2_prime_at_infinity = Verdict::inconclusive;
  Verdict a3 = Verdict::inconclusive;
  /// Phi(x) = O(x^(2/p)) as x -> +0.
  Verdict bilipschitz_premise = Verdict::inconclusive;
  double K = 0.0;

  /// (A0), (A1), (A2-1), (A2-2), (A2-3), (A3).
  Verdict finiteness_set() const;
  /// (A0), (A1), (A2-1), (A2-2)', (A2-3), (A3).
  Verdict equivalence_set() const;
};

AssumptionReport check_assumptions(const PhiSpec &phi, double p);

} // namespace ohara
