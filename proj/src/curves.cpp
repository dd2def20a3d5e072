#include "ohara/curves.hpp"

#include "ohara/io.hpp"
#include "ohara/summation.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ohara {

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Point central_difference(const ParamCurve::Map &f, double t, double h, std::size_t dim) {
  const Point a = f(t + h);
  const Point b = f(t - h);
  Point d{};
  for (std::size_t c = 0; c < dim; ++c)
    d[c] = (a[c] - b[c]) / (2.0 * h);
  return d;
}

// Arc length over a short panel; the integrand is smooth so a fixed
// 20-point rule is accurate to rounding.
double panel_arc(const ParamCurve &curve, double t0, double t1) {
  return gauss<double, 20>::integrate([&](double t) { return curve.speed(t); }, t0, t1);
}

double chord(const Point &a, const Point &b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t c = 0; c < dim; ++c)
    s += (a[c] - b[c]) * (a[c] - b[c]);
  return std::sqrt(s);
}

double curvature_at(const ParamCurve &curve, double t) {
  const Point v = curve.velocity(t);
  const Point a = curve.acceleration(t);
  double vv = 0.0, aa = 0.0, va = 0.0;
  for (std::size_t c = 0; c < curve.dim(); ++c) {
    vv += v[c] * v[c];
    aa += a[c] * a[c];
    va += v[c] * a[c];
  }
  // |v x a| / |v|^3 in any dimension via the Gram determinant.
  const double cross2 = std::max(vv * aa - va * va, 0.0);
  return std::sqrt(cross2) / (vv * std::sqrt(vv));
}

InscribedPolygon finish_inscribed(const ParamCurve &curve, std::vector<double> params) {
  const std::size_t n = params.size();
  const std::size_t dim = curve.dim();
  std::vector<Point> pts(n);
  for (std::size_t k = 0; k < n; ++k)
    pts[k] = curve.position(params[k]);

  const double L = curve.total_length();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double c = chord(pts[k], pts[(k + 1) % n], dim);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }

  Polygon poly = Polygon::from_points(pts, dim);
  const EmbeddingReport report = validate_embedded(poly, 1e-9 * L);
  if (!report.ok)
    throw NotEmbeddedError("curve '" + curve.name() + "' is not embedded at resolution n=" +
                               std::to_string(n) + " (min gap " + format_double(report.min_gap) +
                               ")",
                           report);
  const double scale = static_cast<double>(n) / L;
  return InscribedPolygon{std::move(poly), std::move(params), lo * scale, hi * scale, report};
}

} // namespace

double norm(const Point &v, std::size_t dim) {
  double s = 0.0;
  for (std::size_t c = 0; c < dim; ++c)
    s += v[c] * v[c];
  return std::sqrt(s);
}

ParamCurve::ParamCurve(std::string name, std::size_t dim, Map position, std::optional<Map> derivative,
                       std::optional<Map> second_derivative, std::optional<double> known_length)
    : name_(std::move(name)), dim_(dim), position_(std::move(position)),
      derivative_(std::move(derivative)), second_(std::move(second_derivative)),
      known_length_(known_length) {
  if (dim_ < 2 || dim_ > kMaxDim)
    throw ValidationError("curve dimension must lie in [2, 8]");
  if (!position_)
    throw ValidationError("curve '" + name_ + "' has no position map");

  const Point p0 = position_(0.0);
  const Point p1 = position_(1.0);
  if (chord(p0, p1, dim_) > 1e-9 * std::max(1.0, norm(p0, dim_)))
    throw ValidationError("curve '" + name_ + "' is not closed: f(0) != f(1)");

  constexpr std::size_t kGrid = 1024;
  double max_speed = 0.0;
  for (std::size_t m = 0; m < kGrid; ++m) {
    const double t = static_cast<double>(m) / kGrid;
    const double v = speed(t);
    if (!std::isfinite(v) || !(v > 0.0))
      throw ValidationError("curve '" + name_ + "' is not regular: zero or non-finite velocity");
    max_speed = std::max(max_speed, v);
  }
  if (derivative_) {
    for (std::size_t m = 0; m < 64; ++m) {
      const double t = (m + 0.37) / 64.0;
      const Point exact = (*derivative_)(t);
      const Point fd = central_difference(position_, t, 1e-5, dim_);
      double err = 0.0;
      for (std::size_t c = 0; c < dim_; ++c)
        err = std::max(err, std::abs(exact[c] - fd[c]));
      if (err > 1e-6 * max_speed)
        throw ValidationError("curve '" + name_ + "': derivative disagrees with finite differences");
    }
  }

  table_.assign(kTablePanels + 1, 0.0);
  CompensatedSum acc;
  for (std::size_t m = 0; m < kTablePanels; ++m) {
    acc += panel_arc(*this, static_cast<double>(m) / kTablePanels,
                     static_cast<double>(m + 1) / kTablePanels);
    table_[m + 1] = acc.value();
  }
}

Point ParamCurve::velocity(double t) const {
  if (derivative_)
    return (*derivative_)(t);
  return central_difference(position_, t, 1e-6, dim_);
}

Point ParamCurve::acceleration(double t) const {
  if (second_)
    return (*second_)(t);
  const double h = 1e-5;
  const Point a = velocity(t + h);
  const Point b = velocity(t - h);
  Point d{};
  for (std::size_t c = 0; c < dim_; ++c)
    d[c] = (a[c] - b[c]) / (2.0 * h);
  return d;
}

double ParamCurve::speed(double t) const { return norm(velocity(t), dim_); }

ParamCurve circle_curve(double radius) {
  if (!(radius > 0.0))
    throw ValidationError("circle radius must be positive");
  auto pos = [radius](double t) {
    return Point{radius * std::cos(kTwoPi * t), radius * std::sin(kTwoPi * t)};
  };
  auto vel = [radius](double t) {
    return Point{-kTwoPi * radius * std::sin(kTwoPi * t), kTwoPi * radius * std::cos(kTwoPi * t)};
  };
  auto acc = [radius](double t) {
    const double w2 = kTwoPi * kTwoPi * radius;
    return Point{-w2 * std::cos(kTwoPi * t), -w2 * std::sin(kTwoPi * t)};
  };
  return ParamCurve("circle:r=" + format_short(radius), 2, pos, vel, acc, kTwoPi * radius);
}

ParamCurve torus_knot(int a, int b, double major_radius, double minor_radius) {
  if (a < 1 || b < 1 || std::gcd(a, b) != 1)
    throw ValidationError("torus knot windings must be positive and coprime");
  if (!(major_radius > minor_radius && minor_radius > 0.0))
    throw ValidationError("torus knot needs R > r > 0");
  const double A = kTwoPi * a;
  const double B = kTwoPi * b;
  const double R = major_radius;
  const double r = minor_radius;
  auto pos = [=](double t) {
    const double rho = R + r * std::cos(B * t);
    return Point{rho * std::cos(A * t), rho * std::sin(A * t), r * std::sin(B * t)};
  };
  auto vel = [=](double t) {
    const double rho = R + r * std::cos(B * t);
    const double drho = -r * B * std::sin(B * t);
    const double ca = std::cos(A * t), sa = std::sin(A * t);
    return Point{drho * ca - A * rho * sa, drho * sa + A * rho * ca, r * B * std::cos(B * t)};
  };
  auto acc = [=](double t) {
    const double rho = R + r * std::cos(B * t);
    const double drho = -r * B * std::sin(B * t);
    const double ddrho = -r * B * B * std::cos(B * t);
    const double ca = std::cos(A * t), sa = std::sin(A * t);
    return Point{ddrho * ca - 2.0 * A * drho * sa - A * A * rho * ca,
                 ddrho * sa + 2.0 * A * drho * ca - A * A * rho * sa,
                 -r * B * B * std::sin(B * t)};
  };
  std::string name = "torus:a=" + std::to_string(a) + ",b=" + std::to_string(b) +
                     ",R=" + format_short(R) + ",r=" + format_short(r);
  return ParamCurve(std::move(name), 3, pos, vel, acc);
}

ParamCurve parse_curve_spec(const std::string &spec) {
  const SpecString s = parse_spec_string(spec);
  if (s.name == "circle")
    return circle_curve(s.get_or("r", 1.0));
  if (s.name == "torus") {
    const double a = s.get("a");
    const double b = s.get("b");
    if (a != std::floor(a) || b != std::floor(b))
      throw ValidationError("torus windings must be integers");
    return torus_knot(static_cast<int>(a), static_cast<int>(b), s.get("R"), s.get("r"));
  }
  throw ValidationError("unknown curve '" + s.name + "' (expected circle or torus)");
}

double arc_length(const ParamCurve &curve, double t0, double t1) {
  if (!(0.0 <= t0 && t0 <= t1 && t1 <= 1.0))
    throw ValidationError("arc_length requires 0 <= t0 <= t1 <= 1");
  if (t0 == t1)
    return 0.0;
  auto speed = [&](double t) {
    const double v = curve.speed(t);
    if (!std::isfinite(v))
      throw NumericError("non-finite speed sample at t=" + format_double(t));
    return v;
  };
  // One Gauss-Kronrod rule per table panel, refined only where the panel
  // estimate exceeds its share of the budget.
  constexpr auto P = static_cast<double>(ParamCurve::kTablePanels);
  const double budget = 1e-12 * (t1 - t0 + 1.0);
  CompensatedSum total;
  double err_total = 0.0;
  double a = t0;
  while (a < t1) {
    double b = std::min(t1, (std::floor(a * P) + 1.0) / P);
    if (b <= a)
      b = std::min(t1, (std::floor(a * P) + 2.0) / P);
    double v = gauss_kronrod<double, 31>::integrate(speed, a, b, 0, 0.0);
    double err = std::abs(v - gauss<double, 15>::integrate(speed, a, b));
    if (err > budget * (b - a))
      v = gauss_kronrod<double, 31>::integrate(speed, a, b, 8, 1e-13, &err);
    total += v;
    err_total += err;
    a = b;
  }
  if (err_total > budget)
    throw NumericError("arc_length quadrature did not reach tolerance");
  return total.value();
}

double param_at_arc(const ParamCurve &curve, double s) {
  const double L = curve.total_length();
  if (!(s >= 0.0 && s < L))
    throw ValidationError("param_at_arc requires 0 <= s < L");
  if (s == 0.0)
    return 0.0;

  constexpr std::size_t P = ParamCurve::kTablePanels;
  std::size_t lo = 0, hi = P;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (curve.table_arc(mid) <= s ? lo : hi) = mid;
  }
  const double t_lo = static_cast<double>(lo) / P;
  const double t_hi = static_cast<double>(lo + 1) / P;
  const double base = curve.table_arc(lo);
  const double target = s - base;

  // Bracketed Newton with bisection fallback on g(t) = arc(t_lo, t) - target.
  double a = t_lo, b = t_hi;
  double t = t_lo + (t_hi - t_lo) * target / (curve.table_arc(lo + 1) - base);
  for (int iter = 0; iter < 60; ++iter) {
    const double g = panel_arc(curve, t_lo, t) - target;
    if (g > 0.0)
      b = t;
    else
      a = t;
    const double step = g / curve.speed(t);
    double next = t - step;
    if (!(next > a && next < b))
      next = 0.5 * (a + b);
    if (std::abs(next - t) <= 4e-16 * std::max(1e-3, t) || b - a <= 4e-16)
      return next;
    t = next;
  }
  return t;
}

InscribedPolygon inscribe_equal_arc(const ParamCurve &curve, std::size_t n) {
  if (n < 3)
    throw ValidationError("inscribed polygon needs n >= 3");
  const double L = curve.total_length();
  std::vector<double> params(n);
  for (std::size_t k = 0; k < n; ++k)
    params[k] = param_at_arc(curve, L * static_cast<double>(k) / static_cast<double>(n));
  return finish_inscribed(curve, std::move(params));
}

namespace {

// Walks n chords of length c from arc position 0. Returns the arc position
// reached after the n-th chord (L for an exactly closing c), filling the
// vertex arc positions.
double walk_chords(const ParamCurve &curve, double c, std::size_t n, std::vector<double> &arcs) {
  const double L = curve.total_length();
  const std::size_t dim = curve.dim();
  auto at_arc = [&](double s) {
    const double wrapped = std::fmod(s, L);
    return curve.position(param_at_arc(curve, wrapped < 0.0 ? wrapped + L : wrapped));
  };
  arcs.assign(n, 0.0);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    arcs[k] = s;
    const Point start = at_arc(s);
    auto excess = [&](double u) { return chord(start, at_arc(u), dim) - c; };
    // chord <= arc, so the crossing lies at arc offset >= c.
    double a = s + c;
    double fa = excess(a);
    const double step = c / 8.0;
    double b = a + step;
    double fb = excess(b);
    while (fb < 0.0) {
      a = b;
      fa = fb;
      b += step;
      if (b > s + L)
        throw NumericError("equal-chord walk found no crossing (chord longer than curve width)");
      fb = excess(b);
    }
    if (fa >= 0.0) {
      s = a;
      continue;
    }
    std::uintmax_t max_iter = 100;
    auto tol = boost::math::tools::eps_tolerance<double>(50);
    const auto root = boost::math::tools::toms748_solve(excess, a, b, fa, fb, tol, max_iter);
    s = 0.5 * (root.first + root.second);
  }
  return s;
}

} // namespace

InscribedPolygon inscribe_equal_chord(const ParamCurve &curve, std::size_t n, double tol) {
  if (n < 3)
    throw ValidationError("inscribed polygon needs n >= 3");
  const double L = curve.total_length();
  std::vector<double> arcs;

  // Residual of the closure condition, monotone increasing in c. A chord
  // the walk cannot reach counts as an overshoot.
  auto residual = [&](double c) {
    try {
      return walk_chords(curve, c, n, arcs) - L;
    } catch (const NumericError &) {
      return L;
    }
  };

  double c0 = inscribe_equal_arc(curve, n).polygon.total_length() / static_cast<double>(n);
  double r0 = residual(c0);
  double c1 = c0 * (r0 > 0.0 ? 0.99 : 1.01);
  double r1 = residual(c1);
  int outer = 0;
  // Secant iteration, falling back to bisection once a bracket exists.
  double lo = 0.0, hi = 0.0, r_lo = 0.0, r_hi = 0.0;
  bool bracketed = false;
  auto update_bracket = [&](double c, double r) {
    if (r < 0.0 && (!bracketed || c > lo)) {
      lo = c;
      r_lo = r;
    }
    if (r > 0.0 && (!bracketed || c < hi)) {
      hi = c;
      r_hi = r;
    }
  };
  update_bracket(c0, r0);
  update_bracket(c1, r1);

  auto chord_ratio = [&](double c) {
    residual(c);
    double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Point a = curve.position(param_at_arc(curve, arcs[k]));
      const Point b = curve.position(param_at_arc(curve, arcs[(k + 1) % n]));
      const double d = chord(a, b, curve.dim());
      cmin = std::min(cmin, d);
      cmax = std::max(cmax, d);
    }
    return cmax / cmin;
  };

  while (std::abs(r1) > 1e-13 * L) {
    if (++outer > 200)
      throw NumericError("equal-chord closure did not converge in 200 iterations");
    bracketed = r_lo < 0.0 && r_hi > 0.0;
    double c2 = r1 != r0 ? c1 - r1 * (c1 - c0) / (r1 - r0) : c1;
    if (bracketed && !(c2 > lo && c2 < hi))
      c2 = 0.5 * (lo + hi);
    if (!(c2 > 0.0))
      c2 = 0.5 * c1;
    c0 = c1;
    r0 = r1;
    c1 = c2;
    r1 = residual(c1);
    update_bracket(c1, r1);
    if (bracketed && hi - lo <= 1e-15 * hi)
      break;
  }
  if (chord_ratio(c1) > 1.0 + tol)
    throw NumericError("equal-chord closure converged but chord ratio exceeds tolerance");

  std::vector<double> params(n);
  for (std::size_t k = 0; k < n; ++k)
    params[k] = param_at_arc(curve, arcs[k]);
  return finish_inscribed(curve, std::move(params));
}

Polygon regular_polygon(std::size_t n, double length, std::size_t dim) {
  if (n < 3)
    throw ValidationError("regular polygon needs n >= 3");
  if (!(length > 0.0))
    throw ValidationError("regular polygon length must be positive");
  if (dim < 2 || dim > kMaxDim)
    throw ValidationError("polygon dimension must lie in [2, 8]");
  const double nn = static_cast<double>(n);
  const double radius = length / (2.0 * nn * std::sin(std::numbers::pi / nn));
  std::vector<double> coords(n * dim, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = kTwoPi * static_cast<double>(k) / nn;
    coords[k * dim] = radius * std::cos(theta);
    coords[k * dim + 1] = radius * std::sin(theta);
  }
  return Polygon(dim, std::move(coords));
}

CurvatureEstimate curvature_bound(const ParamCurve &curve, std::size_t grid_size) {
  grid_size = std::max<std::size_t>(grid_size, 4096);
  std::vector<double> kappa(grid_size);
  for (std::size_t m = 0; m < grid_size; ++m)
    kappa[m] = curvature_at(curve, static_cast<double>(m) / grid_size);

  // Refine around each of the strongest local maxima.
  std::vector<std::size_t> peaks;
  for (std::size_t m = 0; m < grid_size; ++m) {
    const double prev = kappa[(m + grid_size - 1) % grid_size];
    const double next = kappa[(m + 1) % grid_size];
    if (kappa[m] >= prev && kappa[m] >= next)
      peaks.push_back(m);
  }
  std::sort(peaks.begin(), peaks.end(), [&](auto a, auto b) { return kappa[a] > kappa[b]; });
  if (peaks.size() > 8)
    peaks.resize(8);

  CurvatureEstimate est{0.0, 0.0, grid_size};
  for (std::size_t m = 0; m < grid_size; ++m)
    if (kappa[m] > est.max_curvature)
      est = {kappa[m], static_cast<double>(m) / grid_size, grid_size};

  const double h = 1.0 / static_cast<double>(grid_size);
  for (std::size_t m : peaks) {
    const double center = static_cast<double>(m) * h;
    const auto r = boost::math::tools::brent_find_minima(
        [&](double t) { return -curvature_at(curve, t); }, center - h, center + h, 52);
    if (-r.second > est.max_curvature) {
      est.max_curvature = -r.second;
      est.argmax_t = r.first - std::floor(r.first);
    }
  }
  return est;
}

} // namespace ohara
