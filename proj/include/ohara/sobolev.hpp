#pragma once

#include "ohara/curves.hpp"
#include "ohara/energy.hpp"
#include "ohara/phi.hpp"

#include <complex>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace ohara {

/// Unit tangent g = f' of the arc-length parametrization, sampled on a
/// uniform arc grid and held as a Fourier series. Evaluates
/// A(h) = int_0^L |g(s + h) - g(s)|^q ds spectrally.
class TangentSpectrum {
public:
  /// Samples `samples` points (a power of two), doubling up to 16384 while
  /// the top eighth of the spectrum carries relative weight above 1e-13.
  /// Throws ValidationError if the curve has no analytic derivative.
  explicit TangentSpectrum(const ParamCurve &curve, std::size_t samples = 1024);

  double length() const { return length_; }
  std::size_t samples() const { return samples_; }
  /// Largest deviation of |g| from 1 on the samples.
  double unit_defect() const { return unit_defect_; }

  double shift_integral(double h, double q) const;

private:
  double length_ = 0.0;
  std::size_t samples_ = 0;
  std::size_t dim_ = 0;
  double unit_defect_ = 0.0;
  std::vector<std::vector<std::complex<double>>> coeffs_;  // per coordinate
  std::shared_ptr<void> plan_;
};

struct SeminormJob {
  const ParamCurve *curve = nullptr;
  std::function<double(double)> psi;
  /// Exponent q of the seminorm [g]_{Psi,q}^q.
  double q = 2.0;
  /// Decreasing cutoffs; empty means L 2^-j, j = 3..20.
  std::vector<double> eps_ladder;
};

/// The job keeps a pointer to `curve`.
SeminormJob make_seminorm_job(const ParamCurve &curve, const PhiSpec &phi, double p);
SeminormJob make_seminorm_job(ParamCurve &&, const PhiSpec &, double) = delete;

/// int_{eps <= |h| <= L/2} A(h) / (Psi(|h|)^q |h|) dh.
double seminorm_cutoff(const SeminormJob &job, double eps);

enum class Finiteness { finite, divergent, inconclusive };

std::string to_string(Finiteness f);

struct SeminormLadder {
  std::vector<double> eps;
  std::vector<double> value;  // cumulative seminorm_cutoff(eps_j)
};

/// Evaluates seminorm_cutoff on every cutoff of the job's ladder,
/// accumulating dyadic shells so the sequence is exactly nondecreasing.
SeminormLadder seminorm_ladder(const SeminormJob &job);

struct FinitenessReport {
  Finiteness classification = Finiteness::inconclusive;
  SeminormLadder ladder;
  double tail_ratio = 0.0;  // ratio of the last two shell increments
  /// Geometric-tail extrapolated seminorm power when finite.
  double seminorm_limit = 0.0;
  /// -d log(increment) / d log(eps) over the last shells when divergent.
  std::optional<double> divergence_exponent;

  struct EnergyLevel {
    std::size_t n;
    double value;
  };
  std::vector<EnergyLevel> energy_ladder;
  double energy_estimate = 0.0;
  bool energy_extrapolated = false;
};

struct FinitenessOptions {
  std::size_t energy_n_max = 1024;
  std::size_t energy_levels = 5;
  EvalOptions eval;
};

/// Cutoff ladder of the W^{Psi,2p} seminorm of the unit tangent with
/// Psi from psi_value(phi, p, .), classified by the shell ratio test,
/// paired with the discrete E^{Phi,p} ladder on inscribed polygons.
FinitenessReport finiteness_diagnostic(const ParamCurve &curve, const PhiSpec &phi, double p,
                                       const FinitenessOptions &opts = {});

struct EnergySeminormReport {
  double seminorm_power = 0.0;  // [f']^{2p}_{Psi,2p}
  double lp_power = 0.0;        // ||f'||_{L^{2p}}^{2p} = L
  double lhs = 0.0;             // seminorm_power + lp_power
  double energy = 0.0;          // E^{Phi,p} estimate
  double lp_norm = 0.0;         // ||f'||_{L^{2p}}
  double ratio = 0.0;           // lhs / (energy + lp_norm)
  /// lhs / (energy + lp_norm) with the seminorm cut at each ladder level.
  std::vector<double> ratio_by_cutoff;
  FinitenessReport finiteness;
};

/// Throws NumericError unless the diagnostic classifies the seminorm finite.
EnergySeminormReport energy_vs_seminorm_report(const ParamCurve &curve, const PhiSpec &phi, double p,
                                               const FinitenessOptions &opts = {});

/// Columns eps, seminorm_power, increment, classification.
void write_finiteness_csv(std::ostream &out, const FinitenessReport &report);

} // namespace ohara
