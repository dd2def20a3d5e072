#pragma once

#include "ohara/curves.hpp"
#include "ohara/geometry.hpp"
#include "ohara/parallel.hpp"
#include "ohara/phi.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace ohara {

/// Exponent pair (alpha, p) of the O'Hara energy E^{alpha,p}.
struct EnergyParams {
  double alpha;
  double p;

  /// Throws ValidationError unless alpha > 0 and p > 0.
  EnergyParams(double alpha, double p);

  /// 2 <= alpha p < 2p + 1. Advisory only.
  bool in_theorem_range() const;
  /// (alpha p - 1) / (2p).
  double sigma() const;
};

/// F(x, y) with x the chord and y the intrinsic distance, 0 < x <= y.
using PairKernelF = std::function<double(double, double)>;

/// x^-alpha - y^-alpha evaluated without cancellation near x == y; clamped
/// at zero.
double ohara_difference(double x, double y, double alpha);

/// (x^-alpha - y^-alpha)^p. Throws NumericError on overflow.
double ohara_kernel_value(double x, double y, const EnergyParams &params);

PairKernelF ohara_kernel(const EnergyParams &params);

/// Sum over ordered pairs i != j of (chord^-alpha - intrinsic^-alpha)^p
/// |e_i| |e_j|. Throws NumericError on coincident vertices or overflow.
double discrete_energy(const Polygon &poly, const EnergyParams &params, const EvalOptions &opts = {});

/// Sum over ordered pairs i != j of F(chord, intrinsic) |e_i| |e_j|. Throws
/// NumericError naming the pair if F is not finite.
double discrete_energy_general(const Polygon &poly, const PairKernelF &F, const EvalOptions &opts = {});

/// discrete_energy_general with F(x, y) = (1/Phi(x) - 1/Phi(y))^p.
double discrete_energy_phi(const Polygon &poly, const PhiSpec &phi, double p,
                           const EvalOptions &opts = {});

/// L^(alpha p - 2) discrete_energy(poly, params).
double scale_invariant_energy(const Polygon &poly, const EnergyParams &params,
                              const EvalOptions &opts = {});

/// Closed form of E^{alpha,1} for a round circle of length L, 2 <= alpha < 3.
double circle_energy_analytic(double alpha, double length);

/// [a]_b = min(a, b - a) for 0 < a < b.
double half_min(double a, double b);

/// Gamma(x) for x > 0.
double gamma_function(double x);

/// (1/n) sum_{k=1}^{n-1} F(sin([k]_n pi/n) / (n sin(pi/n)), [k]_n / n).
double regular_lower_bound(std::size_t n, const PairKernelF &F);

enum class InscribeMode { equal_arc, equal_chord };

struct ExtrapolationResult {
  struct Level {
    std::size_t n;
    double value;  // scale-invariant discrete energy
  };
  std::vector<Level> ladder;
  double order = 0.0;     // 2p - alpha p + 1
  double estimate = 0.0;  // Richardson value, or the last raw value on warning
  bool extrapolated = false;
  bool warning = false;   // ladder not monotone beyond tolerance
  /// Least-squares slope of log |E_n - E_{n/2}| against log n, if at least
  /// three levels exist.
  std::optional<double> fitted_slope;
};

/// Scale-invariant energies on inscribed polygons n_max / 2^k, ..., n_max
/// (n >= 8, at most `levels` entries), extrapolated with the error order
/// n^-(2p - alpha p + 1). Throws ValidationError outside the theorem range.
ExtrapolationResult extrapolated_energy(const ParamCurve &curve, const EnergyParams &params,
                                        std::size_t n_max, std::size_t levels = 6,
                                        InscribeMode mode = InscribeMode::equal_arc,
                                        const EvalOptions &opts = {});

} // namespace ohara
