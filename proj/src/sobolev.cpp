#include "ohara/sobolev.hpp"

#include "ohara/error.hpp"
#include "ohara/io.hpp"
#include "ohara/summation.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>

namespace ohara {

namespace {

using boost::math::quadrature::gauss_kronrod;

// Plan creation in FFTW is not thread-safe; execution is.
std::mutex &fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

template <class T> struct FftwDeleter {
  void operator()(T *p) const { fftw_free(p); }
};
template <class T> using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <class T> FftwBuffer<T> fftw_buffer(std::size_t count) {
  return FftwBuffer<T>(static_cast<T *>(fftw_malloc(sizeof(T) * count)));
}

struct Plan {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plan() {
    std::lock_guard lock(fftw_planner_mutex());
    if (r2c)
      fftw_destroy_plan(r2c);
    if (c2r)
      fftw_destroy_plan(c2r);
  }
};

std::shared_ptr<Plan> make_plan(std::size_t n) {
  auto real = fftw_buffer<double>(n);
  auto spec = fftw_buffer<fftw_complex>(n / 2 + 1);
  auto plan = std::make_shared<Plan>();
  std::lock_guard lock(fftw_planner_mutex());
  const int ni = static_cast<int>(n);
  plan->r2c = fftw_plan_dft_r2c_1d(ni, real.get(), spec.get(), FFTW_ESTIMATE);
  plan->c2r = fftw_plan_dft_c2r_1d(ni, spec.get(), real.get(), FFTW_ESTIMATE);
  return plan;
}

constexpr std::size_t kMaxSamples = 16384;

} // namespace

TangentSpectrum::TangentSpectrum(const ParamCurve &curve, std::size_t samples) {
  if (!curve.has_derivative())
    throw ValidationError("seminorm needs a curve with an analytic derivative");
  if (samples < 16 || (samples & (samples - 1)) != 0)
    throw ValidationError("sample count must be a power of two >= 16");
  length_ = curve.total_length();
  dim_ = curve.dim();

  for (std::size_t n = samples;; n *= 2) {
    samples_ = n;
    const std::size_t half = n / 2 + 1;
    std::vector<Point> tangent(n);
    unit_defect_ = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double t = param_at_arc(curve, length_ * static_cast<double>(m) / static_cast<double>(n));
      Point v = curve.velocity(t);
      const double speed = norm(v, dim_);
      for (std::size_t c = 0; c < dim_; ++c)
        v[c] /= speed;
      tangent[m] = v;
      unit_defect_ = std::max(unit_defect_, std::abs(norm(v, dim_) - 1.0));
    }

    const auto plan = make_plan(n);
    auto real = fftw_buffer<double>(n);
    auto spec = fftw_buffer<fftw_complex>(half);
    coeffs_.assign(dim_, std::vector<std::complex<double>>(half));
    double peak = 0.0, tail = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) {
      for (std::size_t m = 0; m < n; ++m)
        real[m] = tangent[m][c];
      fftw_execute_dft_r2c(plan->r2c, real.get(), spec.get());
      for (std::size_t k = 0; k < half; ++k) {
        coeffs_[c][k] = {spec[k][0] / static_cast<double>(n), spec[k][1] / static_cast<double>(n)};
        const double mag = std::abs(coeffs_[c][k]);
        peak = std::max(peak, mag);
        if (k >= half - half / 8)
          tail = std::max(tail, mag);
      }
    }
    plan_ = plan;
    if (tail <= 1e-13 * peak || n >= kMaxSamples)
      break;
  }
  if (unit_defect_ > 1e-8)
    throw NumericError("tangent samples are not unit length");
}

double TangentSpectrum::shift_integral(double h, double q) const {
  const std::size_t n = samples_;
  const std::size_t half = n / 2 + 1;
  const auto &plan = *std::static_pointer_cast<Plan>(plan_);
  auto spec = fftw_buffer<fftw_complex>(half);
  auto real = fftw_buffer<double>(n);
  std::vector<double> sq(n, 0.0);
  const double w = 2.0 * std::numbers::pi / length_;
  for (std::size_t c = 0; c < dim_; ++c) {
    for (std::size_t k = 0; k < half; ++k) {
      const double theta = w * static_cast<double>(k) * h;
      const double s = std::sin(0.5 * theta);
      // e^{i theta} - 1 without cancellation.
      const std::complex<double> factor(-2.0 * s * s, std::sin(theta));
      const std::complex<double> v = (2 * k == n) ? 0.0 : coeffs_[c][k] * factor;
      spec[k][0] = v.real();
      spec[k][1] = v.imag();
    }
    fftw_execute_dft_c2r(plan.c2r, spec.get(), real.get());
    for (std::size_t m = 0; m < n; ++m)
      sq[m] += real[m] * real[m];
  }
  CompensatedSum sum;
  for (double v : sq)
    sum += q == 2.0 ? v : std::pow(v, 0.5 * q);
  return sum.value() * length_ / static_cast<double>(n);
}

SeminormJob make_seminorm_job(const ParamCurve &curve, const PhiSpec &phi, double p) {
  if (!(p > 0.0))
    throw ValidationError("p must be positive");
  SeminormJob job;
  job.curve = &curve;
  job.psi = [phi, p](double x) { return psi_value(phi, p, x); };
  job.q = 2.0 * p;
  return job;
}

namespace {

std::vector<double> cutoffs(const SeminormJob &job, double length) {
  if (!job.eps_ladder.empty()) {
    for (std::size_t j = 0; j < job.eps_ladder.size(); ++j) {
      const double e = job.eps_ladder[j];
      if (!(e > 0.0 && e < 0.5 * length) || (j > 0 && !(e < job.eps_ladder[j - 1])))
        throw ValidationError("cutoff ladder must be decreasing within (0, L/2)");
    }
    return job.eps_ladder;
  }
  std::vector<double> eps;
  for (int j = 3; j <= 20; ++j)
    eps.push_back(std::ldexp(length, -j));
  return eps;
}

// 2 int_{h0}^{h1} A(h) / (Psi(h)^q h) dh, integrated in u = log h.
double shell(const TangentSpectrum &spec, const SeminormJob &job, double h0, double h1) {
  auto f = [&](double u) {
    const double h = std::exp(u);
    const double psi = job.psi(h);
    return spec.shift_integral(h, job.q) / std::pow(psi, job.q);
  };
  const double v = gauss_kronrod<double, 21>::integrate(f, std::log(h0), std::log(h1), 12, 1e-10);
  if (!std::isfinite(v))
    throw NumericError("seminorm shell integral not finite");
  return 2.0 * v;
}

void require_job(const SeminormJob &job) {
  if (job.curve == nullptr || !job.psi)
    throw ValidationError("seminorm job needs a curve and Psi");
  if (!(job.q > 0.0))
    throw ValidationError("seminorm exponent must be positive");
}

} // namespace

double seminorm_cutoff(const SeminormJob &job, double eps) {
  require_job(job);
  const TangentSpectrum spec(*job.curve);
  const double L = spec.length();
  if (!(eps > 0.0 && eps < 0.5 * L))
    throw ValidationError("cutoff must satisfy 0 < eps < L/2");
  CompensatedSum total;
  double upper = 0.5 * L;
  // Dyadic shells keep each quadrature panel well resolved.
  while (upper > eps) {
    const double lower = std::max(eps, 0.5 * upper);
    total += shell(spec, job, lower, upper);
    upper = lower;
  }
  return total.value();
}

SeminormLadder seminorm_ladder(const SeminormJob &job) {
  require_job(job);
  const TangentSpectrum spec(*job.curve);
  const double L = spec.length();
  SeminormLadder out;
  out.eps = cutoffs(job, L);
  CompensatedSum total;
  double upper = 0.5 * L;
  for (double e : out.eps) {
    while (upper > e) {
      const double lower = std::max(e, 0.5 * upper);
      total += shell(spec, job, lower, upper);
      upper = lower;
    }
    out.value.push_back(total.value());
  }
  return out;
}

std::string to_string(Finiteness f) {
  switch (f) {
  case Finiteness::finite:
    return "finite";
  case Finiteness::divergent:
    return "divergent";
  default:
    return "inconclusive";
  }
}

FinitenessReport finiteness_diagnostic(const ParamCurve &curve, const PhiSpec &phi, double p,
                                       const FinitenessOptions &opts) {
  FinitenessReport rep;
  rep.ladder = seminorm_ladder(make_seminorm_job(curve, phi, p));
  const auto &v = rep.ladder.value;
  const auto &eps = rep.ladder.eps;
  if (v.size() < 4)
    throw ValidationError("finiteness diagnostic needs at least four cutoffs");

  std::vector<double> inc(v.size());
  inc[0] = v[0];
  for (std::size_t j = 1; j < v.size(); ++j)
    inc[j] = v[j] - v[j - 1];
  const std::size_t J = v.size() - 1;
  const double rho = inc[J] / inc[J - 1];
  const double rho_prev = inc[J - 1] / inc[J - 2];
  rep.tail_ratio = rho;
  if (rho <= 0.999 && rho_prev <= 0.999) {
    rep.classification = Finiteness::finite;
    rep.seminorm_limit = v[J] + inc[J] * rho / (1.0 - rho);
  } else if (rho >= 1.0 && rho_prev >= 1.0) {
    rep.classification = Finiteness::divergent;
    rep.seminorm_limit = std::numeric_limits<double>::infinity();
  } else {
    rep.classification = Finiteness::inconclusive;
    rep.seminorm_limit = v[J];
  }
  if (rep.classification == Finiteness::divergent) {
    // Least squares over the last four shells.
    double mx = 0.0, my = 0.0;
    for (std::size_t j = J - 3; j <= J; ++j) {
      mx += std::log(eps[j]) / 4.0;
      my += std::log(inc[j]) / 4.0;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t j = J - 3; j <= J; ++j) {
      sxy += (std::log(eps[j]) - mx) * (std::log(inc[j]) - my);
      sxx += (std::log(eps[j]) - mx) * (std::log(eps[j]) - mx);
    }
    rep.divergence_exponent = -sxy / sxx;
  }

  const double L = curve.total_length();
  std::optional<EnergyParams> params;
  if (phi.family == PhiFamily::power) {
    EnergyParams ep(phi.alpha, p);
    if (ep.in_theorem_range())
      params = ep;
  }
  if (params) {
    const ExtrapolationResult ex =
        extrapolated_energy(curve, *params, opts.energy_n_max, opts.energy_levels,
                            InscribeMode::equal_arc, opts.eval);
    const double scale = std::pow(L, params->alpha * params->p - 2.0);
    for (const auto &lvl : ex.ladder)
      rep.energy_ladder.push_back({lvl.n, lvl.value / scale});
    rep.energy_estimate = ex.estimate / scale;
    rep.energy_extrapolated = ex.extrapolated;
  } else {
    std::vector<std::size_t> ns{opts.energy_n_max};
    while (ns.size() < opts.energy_levels && ns.back() % 2 == 0 && ns.back() / 2 >= 8)
      ns.push_back(ns.back() / 2);
    std::reverse(ns.begin(), ns.end());
    for (std::size_t n : ns) {
      const InscribedPolygon ip = inscribe_equal_arc(curve, n);
      rep.energy_ladder.push_back({n, discrete_energy_phi(ip.polygon, phi, p, opts.eval)});
    }
    rep.energy_estimate = rep.energy_ladder.back().value;
  }
  return rep;
}

EnergySeminormReport energy_vs_seminorm_report(const ParamCurve &curve, const PhiSpec &phi, double p,
                                               const FinitenessOptions &opts) {
  EnergySeminormReport rep;
  rep.finiteness = finiteness_diagnostic(curve, phi, p, opts);
  if (rep.finiteness.classification != Finiteness::finite)
    throw NumericError("seminorm not classified finite (" + to_string(rep.finiteness.classification) +
                       ")");
  const double L = curve.total_length();
  rep.seminorm_power = rep.finiteness.seminorm_limit;
  rep.lp_power = L;
  rep.lhs = rep.seminorm_power + rep.lp_power;
  rep.energy = rep.finiteness.energy_estimate;
  rep.lp_norm = std::pow(L, 1.0 / (2.0 * p));
  rep.ratio = rep.lhs / (rep.energy + rep.lp_norm);
  for (double s : rep.finiteness.ladder.value)
    rep.ratio_by_cutoff.push_back((s + rep.lp_power) / (rep.energy + rep.lp_norm));
  return rep;
}

void write_finiteness_csv(std::ostream &out, const FinitenessReport &report) {
  out << "eps,seminorm_power,increment,classification\n";
  const auto &v = report.ladder.value;
  const std::string cls = to_string(report.classification);
  for (std::size_t j = 0; j < v.size(); ++j) {
    out << format_double(report.ladder.eps[j]) << ',' << format_double(v[j]) << ','
        << format_double(j == 0 ? v[0] : v[j] - v[j - 1]) << ',' << cls << '\n';
  }
}

} // namespace ohara
