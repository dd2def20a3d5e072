#include "ohara/geometry.hpp"

#include "ohara/error.hpp"
#include "ohara/summation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ohara {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    s += a[k] * b[k];
  return s;
}

std::size_t checked_index(const Polygon &poly, std::size_t one_based) {
  if (one_based < 1 || one_based > poly.size())
    throw ValidationError("vertex index " + std::to_string(one_based) +
                          " out of range [1, " + std::to_string(poly.size()) + "]");
  return one_based - 1;
}

} // namespace

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = b[k] - a[k];
    s += d * d;
  }
  return s;
}

Polygon::Polygon(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ < 2 || dim_ > kMaxDim)
    throw ValidationError("polygon dimension must lie in [2, 8], got " + std::to_string(dim_));
  if (coords_.size() % dim_ != 0)
    throw ValidationError("coordinate count is not a multiple of the dimension");
  const std::size_t n = coords_.size() / dim_;
  if (n < 3)
    throw ValidationError("polygon needs at least 3 vertices, got " + std::to_string(n));
  for (double c : coords_)
    if (!std::isfinite(c))
      throw ValidationError("polygon coordinate is not finite");

  edge_.resize(n);
  arc_.resize(n);
  CompensatedSum acc;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = std::sqrt(squared_distance(vertex(k), vertex((k + 1) % n)));
    if (!(e > 0.0))
      throw ValidationError("degenerate edge: vertices " + std::to_string(k + 1) + " and " +
                            std::to_string((k + 1) % n + 1) + " coincide");
    edge_[k] = e;
    arc_[k] = acc.value();
    acc += e;
  }
  length_ = acc.value();
}

Polygon Polygon::from_points(std::span<const Point> points, std::size_t dim) {
  std::vector<double> flat;
  flat.reserve(points.size() * dim);
  for (const auto &p : points)
    flat.insert(flat.end(), p.begin(), p.begin() + static_cast<std::ptrdiff_t>(dim));
  return Polygon(dim, std::move(flat));
}

Point Polygon::point(std::size_t k) const {
  Point p{};
  const auto v = vertex(k);
  std::copy(v.begin(), v.end(), p.begin());
  return p;
}

double intrinsic_distance(const Polygon &poly, std::size_t i, std::size_t j) {
  const std::size_t a = checked_index(poly, i);
  const std::size_t b = checked_index(poly, j);
  if (a == b)
    throw ValidationError("degenerate pair: i == j");
  const std::size_t lo = std::min(a, b);
  const std::size_t hi = std::max(a, b);
  // Sum the shorter run of edges directly; differences of cum_arc lose
  // relative accuracy for nearby vertices.
  CompensatedSum fwd;
  for (std::size_t k = lo; k < hi; ++k)
    fwd += poly.edge_length(k);
  CompensatedSum bwd;
  for (std::size_t k = hi; k < poly.size(); ++k)
    bwd += poly.edge_length(k);
  for (std::size_t k = 0; k < lo; ++k)
    bwd += poly.edge_length(k);
  return std::min(fwd.value(), bwd.value());
}

double chord_distance(const Polygon &poly, std::size_t i, std::size_t j) {
  const std::size_t a = checked_index(poly, i);
  const std::size_t b = checked_index(poly, j);
  if (a == b)
    throw ValidationError("degenerate pair: i == j");
  return std::sqrt(squared_distance(poly.vertex(a), poly.vertex(b)));
}

double bilipschitz_ratio(const Polygon &poly) {
  const std::size_t n = poly.size();
  const double L = poly.total_length();
  double best = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double arc = 0.0;
    for (std::size_t k = 1; k <= n / 2; ++k) {
      const std::size_t j = (i + k) % n;
      arc += poly.edge_length((i + k - 1) % n);
      const double d = std::min(arc, L - arc);
      const double chord = std::sqrt(squared_distance(poly.vertex(i), poly.vertex(j)));
      best = std::min(best, chord / d);
    }
  }
  return best;
}

double segment_distance(std::span<const double> a0, std::span<const double> a1,
                        std::span<const double> b0, std::span<const double> b1) {
  const std::size_t dim = a0.size();
  Point d1{}, d2{}, r{};
  for (std::size_t k = 0; k < dim; ++k) {
    d1[k] = a1[k] - a0[k];
    d2[k] = b1[k] - b0[k];
    r[k] = a0[k] - b0[k];
  }
  const std::span<const double> u(d1.data(), dim), v(d2.data(), dim), w(r.data(), dim);
  const double a = dot(u, u);
  const double e = dot(v, v);
  const double f = dot(v, w);
  const double c = dot(u, w);
  const double b = dot(u, v);
  const double denom = a * e - b * b;

  // Closest points a0 + s*u and b0 + t*v, clamped to the unit square.
  double s = denom > 1e-14 * a * e ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
  double t = (b * s + f) / e;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }
  double d2sum = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double diff = w[k] + s * u[k] - t * v[k];
    d2sum += diff * diff;
  }
  return std::sqrt(d2sum);
}

EmbeddingReport validate_embedded(const Polygon &poly, double tol) {
  const std::size_t n = poly.size();
  const std::size_t dim = poly.dim();
  EmbeddingReport report;

  std::vector<double> mid(n * dim);
  for (std::size_t k = 0; k < n; ++k) {
    const auto a = poly.vertex(k);
    const auto b = poly.vertex((k + 1) % n);
    for (std::size_t c = 0; c < dim; ++c)
      mid[k * dim + c] = 0.5 * (a[c] + b[c]);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> mi(mid.data() + i * dim, dim);
    const double hi = 0.5 * poly.edge_length(i);
    // Edges i-1 and i+1 share a vertex with i; j > i covers each pair once.
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1)
        continue;
      // Midpoint distance minus half-lengths bounds the segment distance from below.
      const double reach = hi + 0.5 * poly.edge_length(j) + report.min_gap;
      const std::span<const double> mj(mid.data() + j * dim, dim);
      if (squared_distance(mi, mj) > reach * reach)
        continue;
      const double d = segment_distance(poly.vertex(i), poly.vertex((i + 1) % n), poly.vertex(j),
                                        poly.vertex((j + 1) % n));
      if (d < report.min_gap) {
        report.min_gap = d;
        report.edge_a = i;
        report.edge_b = j;
      }
    }
  }
  report.ok = report.min_gap > tol;
  return report;
}

Polygon scale_about_centroid(const Polygon &poly, double factor) {
  const std::size_t n = poly.size();
  const std::size_t dim = poly.dim();
  Point centroid{};
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t c = 0; c < dim; ++c)
      centroid[c] += poly.vertex(k)[c];
  for (std::size_t c = 0; c < dim; ++c)
    centroid[c] /= static_cast<double>(n);

  std::vector<double> coords(poly.coords().begin(), poly.coords().end());
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t c = 0; c < dim; ++c)
      coords[k * dim + c] = centroid[c] + factor * (coords[k * dim + c] - centroid[c]);
  return Polygon(dim, std::move(coords));
}

Polygon normalize_to_unit_length(const Polygon &poly) {
  return scale_about_centroid(poly, 1.0 / poly.total_length());
}

} // namespace ohara
