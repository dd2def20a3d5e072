#include "ohara/energy.hpp"

#include "ohara/error.hpp"
#include "ohara/io.hpp"
#include "ohara/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace ohara {

namespace {

constexpr std::size_t kRowsPerBlock = 32;

std::string pair_label(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
}

template <std::size_t Dim>
double vertex_distance(const double *a, const double *b, std::size_t dim) {
  double s = 0.0;
  if constexpr (Dim == 0) {
    for (std::size_t c = 0; c < dim; ++c) {
      const double d = a[c] - b[c];
      s += d * d;
    }
  } else {
    for (std::size_t c = 0; c < Dim; ++c) {
      const double d = a[c] - b[c];
      s += d * d;
    }
  }
  return std::sqrt(s);
}

// Sum over unordered pairs {i, j}, counted twice, of kernel(x, y, i, j)
// |e_i| |e_j|. Rows are grouped into fixed blocks whose partial sums are
// reduced pairwise, so the result does not depend on the thread count.
template <std::size_t Dim, class Kernel>
double pair_sum_impl(const Polygon &poly, const Kernel &kernel, const EvalOptions &opts) {
  const std::size_t n = poly.size();
  const std::size_t dim = poly.dim();
  const std::size_t half = n / 2;
  const bool even = n % 2 == 0;
  const double L = poly.total_length();
  const double *coords = poly.coords().data();
  const auto edges = poly.edge_lengths();

  const std::size_t blocks = (n + kRowsPerBlock - 1) / kRowsPerBlock;
  std::vector<double> partial(blocks, 0.0);

  parallel_for_blocks(blocks, resolve_threads(opts.threads), [&](std::size_t b) {
    CompensatedSum block_sum;
    const std::size_t row_end = std::min(n, (b + 1) * kRowsPerBlock);
    for (std::size_t i = b * kRowsPerBlock; i < row_end; ++i) {
      const double *xi = coords + i * dim;
      CompensatedSum row;
      CompensatedSum arc;
      std::size_t j = i;
      for (std::size_t k = 1; k <= half; ++k) {
        arc += edges[j];
        j = j + 1 == n ? 0 : j + 1;
        const double forward = arc.value();
        const double y = std::min(forward, L - forward);
        const double x = vertex_distance<Dim>(xi, coords + j * dim, dim);
        const double f = kernel(x, y, i, j);
        const double w = (even && k == half) ? 1.0 : 2.0;
        row += w * f * edges[j];
      }
      block_sum += row.value() * edges[i];
    }
    partial[b] = block_sum.value();
  });
  return pairwise_sum(partial);
}

template <class Kernel>
double pair_sum(const Polygon &poly, const Kernel &kernel, const EvalOptions &opts) {
  switch (poly.dim()) {
  case 2:
    return pair_sum_impl<2>(poly, kernel, opts);
  case 3:
    return pair_sum_impl<3>(poly, kernel, opts);
  default:
    return pair_sum_impl<0>(poly, kernel, opts);
  }
}

} // namespace

EnergyParams::EnergyParams(double alpha_, double p_) : alpha(alpha_), p(p_) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ValidationError("alpha must be positive and finite");
  if (!(p > 0.0) || !std::isfinite(p))
    throw ValidationError("p must be positive and finite");
}

bool EnergyParams::in_theorem_range() const {
  const double ap = alpha * p;
  return ap >= 2.0 && ap < 2.0 * p + 1.0;
}

double EnergyParams::sigma() const { return (alpha * p - 1.0) / (2.0 * p); }

double ohara_difference(double x, double y, double alpha) {
  if (!(x < y))
    return 0.0;
  const double r = (y - x) / x;
  if (alpha == 2.0)
    return r * (2.0 + r) / (y * y);
  // x^-a - y^-a = y^-a ((y/x)^a - 1)
  return std::exp(-alpha * std::log(y)) * std::expm1(alpha * std::log1p(r));
}

double ohara_kernel_value(double x, double y, const EnergyParams &params) {
  const double d = ohara_difference(x, y, params.alpha);
  if (params.p == 1.0)
    return d;
  const double v = std::pow(d, params.p);
  if (!std::isfinite(v))
    throw NumericError("kernel overflow: (x^-alpha - y^-alpha)^p exceeds double range at x=" +
                       format_double(x));
  return v;
}

PairKernelF ohara_kernel(const EnergyParams &params) {
  return [params](double x, double y) { return ohara_kernel_value(x, y, params); };
}

double discrete_energy(const Polygon &poly, const EnergyParams &params, const EvalOptions &opts) {
  auto kernel = [&params](double x, double y, std::size_t i, std::size_t j) {
    if (x == 0.0)
      throw NumericError("infinite energy: coincident vertices " + pair_label(i, j));
    return ohara_kernel_value(x, y, params);
  };
  const double e = pair_sum(poly, kernel, opts);
  if (!std::isfinite(e))
    throw NumericError("discrete energy overflowed");
  return e;
}

double discrete_energy_general(const Polygon &poly, const PairKernelF &F, const EvalOptions &opts) {
  auto kernel = [&F](double x, double y, std::size_t i, std::size_t j) {
    const double v = F(x, y);
    if (!std::isfinite(v))
      throw NumericError("kernel not finite at vertex pair " + pair_label(i, j) +
                         " (chord " + format_double(x) + ", intrinsic " + format_double(y) + ")");
    return v;
  };
  const double e = pair_sum(poly, kernel, opts);
  if (!std::isfinite(e))
    throw NumericError("discrete energy overflowed");
  return e;
}

double discrete_energy_phi(const Polygon &poly, const PhiSpec &phi, double p, const EvalOptions &opts) {
  if (!(p > 0.0))
    throw ValidationError("p must be positive");
  PairKernelF F = [&phi, p](double x, double y) {
    const double px = phi(x);
    const double py = phi(y);
    if (!(px > 0.0) || !(py > 0.0))
      throw ValidationError("Phi not strictly positive at x=" + format_double(px > 0.0 ? y : x));
    const double d = std::max((py - px) / (px * py), 0.0);
    return p == 1.0 ? d : std::pow(d, p);
  };
  return discrete_energy_general(poly, F, opts);
}

double scale_invariant_energy(const Polygon &poly, const EnergyParams &params, const EvalOptions &opts) {
  const double factor = std::pow(poly.total_length(), params.alpha * params.p - 2.0);
  return factor * discrete_energy(poly, params, opts);
}

double gamma_function(double x) {
  if (!(x > 0.0))
    throw ValidationError("gamma_function requires x > 0");
  return std::tgamma(x);
}

double circle_energy_analytic(double alpha, double length) {
  if (!(alpha >= 2.0 && alpha < 3.0))
    throw ValidationError("formula valid only for 2 <= alpha < 3");
  if (!(length > 0.0))
    throw ValidationError("length must be positive");
  const double pi = std::numbers::pi;
  const double series = (alpha - 2.0) * std::pow(pi, alpha - 0.5) *
                        gamma_function((3.0 - alpha) / 2.0) / gamma_function((4.0 - alpha) / 2.0);
  return (series + std::pow(2.0, alpha)) / ((alpha - 1.0) * std::pow(length, alpha - 2.0));
}

double half_min(double a, double b) {
  if (!(a > 0.0 && a < b))
    throw ValidationError("half_min requires 0 < a < b");
  return std::min(a, b - a);
}

double regular_lower_bound(std::size_t n, const PairKernelF &F) {
  if (n < 3)
    throw ValidationError("regular_lower_bound needs n >= 3");
  const double nn = static_cast<double>(n);
  const double denom = nn * std::sin(std::numbers::pi / nn);
  CompensatedSum sum;
  for (std::size_t k = 1; k < n; ++k) {
    const double m = half_min(static_cast<double>(k), nn);
    sum += F(std::sin(m * std::numbers::pi / nn) / denom, m / nn);
  }
  return sum.value() / nn;
}

ExtrapolationResult extrapolated_energy(const ParamCurve &curve, const EnergyParams &params,
                                        std::size_t n_max, std::size_t levels, InscribeMode mode,
                                        const EvalOptions &opts) {
  if (!params.in_theorem_range())
    throw ValidationError("extrapolation requires 2 <= alpha p < 2p + 1");
  if (n_max < 8)
    throw ValidationError("extrapolation needs n_max >= 8");
  if (levels < 2)
    throw ValidationError("extrapolation needs at least two levels");

  std::vector<std::size_t> ns{n_max};
  while (ns.size() < levels && ns.back() % 2 == 0 && ns.back() / 2 >= 8)
    ns.push_back(ns.back() / 2);
  std::reverse(ns.begin(), ns.end());

  ExtrapolationResult result;
  result.order = 2.0 * params.p - params.alpha * params.p + 1.0;
  for (std::size_t n : ns) {
    const InscribedPolygon ip =
        mode == InscribeMode::equal_arc ? inscribe_equal_arc(curve, n) : inscribe_equal_chord(curve, n);
    result.ladder.push_back({n, scale_invariant_energy(ip.polygon, params, opts)});
  }

  const auto &lad = result.ladder;
  result.estimate = lad.back().value;
  if (lad.size() < 2)
    return result;

  const double tol = 1e-12 * std::abs(lad.back().value);
  int sign = 0;
  for (std::size_t k = 1; k < lad.size(); ++k) {
    const double d = lad[k].value - lad[k - 1].value;
    if (std::abs(d) <= tol)
      continue;
    const int s = d > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign)
      result.warning = true;
    sign = s;
  }

  if (lad.size() >= 3) {
    std::vector<double> lx, ly;
    for (std::size_t k = 1; k < lad.size(); ++k) {
      const double d = std::abs(lad[k].value - lad[k - 1].value);
      if (d > 0.0) {
        lx.push_back(std::log(static_cast<double>(lad[k].n)));
        ly.push_back(std::log(d));
      }
    }
    if (lx.size() >= 2) {
      const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
      const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t k = 0; k < lx.size(); ++k) {
        sxy += (lx[k] - mx) * (ly[k] - my);
        sxx += (lx[k] - mx) * (lx[k] - mx);
      }
      result.fitted_slope = sxy / sxx;
    }
  }

  if (result.warning)
    return result;
  const double last = lad.back().value;
  const double prev = lad[lad.size() - 2].value;
  result.estimate = last + (last - prev) / (std::pow(2.0, result.order) - 1.0);
  result.extrapolated = true;
  return result;
}

} // namespace ohara
