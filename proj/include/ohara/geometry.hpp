#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace ohara {

inline constexpr std::size_t kMaxDim = 8;

/// Fixed-capacity point; only the first `dim` coordinates are meaningful.
using Point = std::array<double, kMaxDim>;

/// Closed polygon in R^d (2 <= d <= 8), implicitly closed from the last
/// vertex back to the first. Immutable: edge lengths and cumulative arc
/// positions are computed once at construction.
///
/// Accessors take 0-based indices. The free functions intrinsic_distance()
/// and chord_distance() use the 1-based vertex numbering a_1, ..., a_n.
class Polygon {
public:
  /// `coords` holds n*dim values, vertex-major. Throws ValidationError when
  /// n < 3, the dimension is unsupported, a coordinate is not finite, or two
  /// consecutive vertices coincide.
  Polygon(std::size_t dim, std::vector<double> coords);

  static Polygon from_points(std::span<const Point> points, std::size_t dim);

  std::size_t size() const { return edge_.size(); }
  std::size_t dim() const { return dim_; }

  std::span<const double> vertex(std::size_t k) const {
    return {coords_.data() + k * dim_, dim_};
  }
  Point point(std::size_t k) const;
  std::span<const double> coords() const { return coords_; }

  /// Length of the edge from vertex k to vertex k+1 (mod n).
  double edge_length(std::size_t k) const { return edge_[k]; }
  std::span<const double> edge_lengths() const { return edge_; }
  /// Arc position of vertex k; cum_arc(0) == 0.
  double cum_arc(std::size_t k) const { return arc_[k]; }
  double total_length() const { return length_; }

private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<double> edge_;
  std::vector<double> arc_;
  double length_ = 0.0;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

/// Shorter arc length between vertices i and j (1-based).
double intrinsic_distance(const Polygon &poly, std::size_t i, std::size_t j);

/// Euclidean distance between vertices i and j (1-based).
double chord_distance(const Polygon &poly, std::size_t i, std::size_t j);

/// min over vertex pairs of chord / intrinsic distance, in (0, 1].
double bilipschitz_ratio(const Polygon &poly);

struct EmbeddingReport {
  bool ok = true;
  /// Smallest distance between two non-adjacent edges; +inf for triangles.
  double min_gap = std::numeric_limits<double>::infinity();
  std::size_t edge_a = 0;
  std::size_t edge_b = 0;
};

/// Minimum segment-to-segment distance over all pairs of edges that do not
/// share a vertex. ok iff min_gap > tol.
EmbeddingReport validate_embedded(const Polygon &poly, double tol);

/// Closest distance between segments [a0,a1] and [b0,b1].
double segment_distance(std::span<const double> a0, std::span<const double> a1,
                        std::span<const double> b0, std::span<const double> b1);

/// Uniform scaling about the vertex centroid.
Polygon scale_about_centroid(const Polygon &poly, double factor);

/// Rescales so that total_length() == 1.
Polygon normalize_to_unit_length(const Polygon &poly);

} // namespace ohara
