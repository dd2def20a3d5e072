#pragma once

#include "ohara/error.hpp"
#include "ohara/geometry.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ohara {

/// Smooth closed curve t -> f(t), t in [0, 1), periodic with period 1.
///
/// A 1024-panel cumulative arc-length table is built at construction and
/// brackets the Newton solves in param_at_arc(). Missing derivatives fall
/// back to central differences.
class ParamCurve {
public:
  using Map = std::function<Point(double)>;

  static constexpr std::size_t kTablePanels = 1024;

  /// Throws ValidationError if the curve is not closed, a supplied
  /// derivative disagrees with finite differences, or the velocity vanishes
  /// on the 1024-point grid.
  ParamCurve(std::string name, std::size_t dim, Map position, std::optional<Map> derivative = {},
             std::optional<Map> second_derivative = {}, std::optional<double> known_length = {});

  const std::string &name() const { return name_; }
  std::size_t dim() const { return dim_; }
  bool has_derivative() const { return derivative_.has_value(); }
  std::optional<double> known_length() const { return known_length_; }

  Point position(double t) const { return position_(t); }
  Point velocity(double t) const;
  Point acceleration(double t) const;
  double speed(double t) const;

  double total_length() const { return table_.back(); }
  /// Arc length from 0 to panel boundary m / kTablePanels.
  double table_arc(std::size_t m) const { return table_[m]; }

private:
  std::string name_;
  std::size_t dim_;
  Map position_;
  std::optional<Map> derivative_;
  std::optional<Map> second_;
  std::optional<double> known_length_;
  std::vector<double> table_;
};

double norm(const Point &v, std::size_t dim);

/// Circle of the given radius in the xy-plane (d = 2).
ParamCurve circle_curve(double radius);

/// ((R + r cos 2pi b t) cos 2pi a t, (R + r cos 2pi b t) sin 2pi a t, r sin 2pi b t).
/// Requires a, b >= 1 coprime and R > r > 0.
ParamCurve torus_knot(int a, int b, double major_radius, double minor_radius);

/// Parses `circle:r=1` or `torus:a=2,b=3,R=2,r=1`.
ParamCurve parse_curve_spec(const std::string &spec);

/// Arc length of the curve over [t0, t1] by adaptive Gauss-Kronrod quadrature.
double arc_length(const ParamCurve &curve, double t0, double t1);

/// Parameter t with arc_length(curve, 0, t) == s. Requires 0 <= s < L.
double param_at_arc(const ParamCurve &curve, double s);

struct InscribedPolygon {
  Polygon polygon;
  std::vector<double> params;  // b_k, as curve parameters in [0, 1)
  /// Empirical chord-bound constants: min and max of chord * n / L, with L
  /// the curve length.
  double c_lower = 0.0;
  double c_upper = 0.0;
  EmbeddingReport embedding;
};

class NotEmbeddedError : public ValidationError {
public:
  NotEmbeddedError(const std::string &what, EmbeddingReport report)
      : ValidationError(what), report_(report) {}
  const EmbeddingReport &report() const { return report_; }

private:
  EmbeddingReport report_;
};

/// Vertices at equal arc-length spacing L/n starting from t = 0.
InscribedPolygon inscribe_equal_arc(const ParamCurve &curve, std::size_t n);

/// Vertices chosen so that all n chords share one length, up to `tol` in the
/// max/min chord ratio.
InscribedPolygon inscribe_equal_chord(const ParamCurve &curve, std::size_t n, double tol = 1e-10);

/// Planar regular n-gon of total length L embedded in R^dim, vertex k at
/// angle 2 pi k / n on the circle of radius L / (2 n sin(pi/n)).
Polygon regular_polygon(std::size_t n, double length, std::size_t dim = 2);

struct CurvatureEstimate {
  double max_curvature = 0.0;
  double argmax_t = 0.0;
  std::size_t grid_size = 0;
};

/// Estimates K = sup |f''(s)| of the arc-length parametrization, i.e. the
/// maximal curvature, on a uniform grid refined around the largest samples.
CurvatureEstimate curvature_bound(const ParamCurve &curve, std::size_t grid_size = 4096);

} // namespace ohara
