#pragma once

#include "ohara/geometry.hpp"

#include <iosfwd>
#include <map>
#include <string>

namespace ohara {

/// `name:key=value,key=value` selection strings used for curves and Phi
/// families.
struct SpecString {
  std::string name;
  std::map<std::string, double> params;

  double get(const std::string &key) const;
  double get_or(const std::string &key, double fallback) const;
};

SpecString parse_spec_string(const std::string &text);

/// Reads a polygon CSV: one vertex per line as `x,y[,z...]`, `#` starts a
/// comment, an optional non-numeric header line is skipped. The first vertex
/// is not repeated at the end.
Polygon read_polygon_csv(std::istream &in);
Polygon read_polygon_csv_file(const std::string &path);

void write_polygon_csv(std::ostream &out, const Polygon &poly);

/// Shortest-round-trip-safe formatting: 17 significant digits.
std::string format_double(double value);

/// Shortest text that parses back to the same double, for labels.
std::string format_short(double value);

} // namespace ohara
