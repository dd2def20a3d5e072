#pragma once

#include <stdexcept>
#include <string>

namespace ohara {

// Invalid input: malformed polygons, out-of-range parameters, bad indices.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string &what) : std::invalid_argument(what) {}
};

// A numerical computation could not produce a finite or converged result.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace ohara
