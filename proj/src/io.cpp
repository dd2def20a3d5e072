#include "ohara/io.hpp"

#include "ohara/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace ohara {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string &token, double &out) {
  const std::string t = trim(token);
  if (t.empty())
    return false;
  std::size_t used = 0;
  try {
    out = std::stod(t, &used);
  } catch (const std::exception &) {
    return false;
  }
  return used == t.size();
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    parts.push_back(item);
  return parts;
}

} // namespace

double SpecString::get(const std::string &key) const {
  const auto it = params.find(key);
  if (it == params.end())
    throw ValidationError("spec '" + name + "' is missing parameter '" + key + "'");
  return it->second;
}

double SpecString::get_or(const std::string &key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

SpecString parse_spec_string(const std::string &text) {
  SpecString spec;
  const auto colon = text.find(':');
  spec.name = trim(text.substr(0, colon));
  if (spec.name.empty())
    throw ValidationError("empty spec string");
  if (colon == std::string::npos)
    return spec;
  for (const auto &item : split(text.substr(colon + 1), ',')) {
    if (trim(item).empty())
      continue;
    const auto eq = item.find('=');
    double value = 0.0;
    if (eq == std::string::npos || !parse_number(item.substr(eq + 1), value))
      throw ValidationError("malformed spec parameter '" + item + "' in '" + text + "'");
    spec.params[trim(item.substr(0, eq))] = value;
  }
  return spec;
}

Polygon read_polygon_csv(std::istream &in) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  bool seen_data = false;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    if (trim(line).empty())
      continue;
    const auto fields = split(line, ',');
    std::vector<double> row;
    bool numeric = true;
    for (const auto &f : fields) {
      double v = 0.0;
      if (!parse_number(f, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (!seen_data && coords.empty())
        continue; // header
      throw ValidationError("non-numeric polygon row at line " + std::to_string(line_no));
    }
    if (dim == 0)
      dim = row.size();
    else if (row.size() != dim)
      throw ValidationError("inconsistent vertex dimension at line " + std::to_string(line_no));
    seen_data = true;
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (dim == 0)
    throw ValidationError("polygon file contains no vertices");
  return Polygon(dim, std::move(coords));
}

Polygon read_polygon_csv_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("cannot open polygon file '" + path + "'");
  return read_polygon_csv(in);
}

std::string format_double(double value) {
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_short(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_polygon_csv(std::ostream &out, const Polygon &poly) {
  static const char *names[] = {"x", "y", "z", "w", "x5", "x6", "x7", "x8"};
  for (std::size_t c = 0; c < poly.dim(); ++c)
    out << (c ? "," : "") << names[c];
  out << '\n';
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const auto v = poly.vertex(k);
    for (std::size_t c = 0; c < poly.dim(); ++c)
      out << (c ? "," : "") << format_double(v[c]);
    out << '\n';
  }
}

} // namespace ohara
