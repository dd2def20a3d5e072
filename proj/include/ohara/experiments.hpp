#pragma once

#include "ohara/geometry.hpp"
#include "ohara/parallel.hpp"
#include "ohara/phi.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace ohara {

struct ExperimentConfig {
  std::string experiment;
  std::vector<double> alphas;
  double p = 1.0;
  /// Strictly increasing, every entry >= 3.
  std::vector<std::size_t> n_values;
  std::string source;
  std::string output;
  std::uint64_t seed = 1;
  std::size_t trials = 200;
  /// Standard deviation of the turning-angle noise, radians.
  double perturbation = 0.1;
  std::vector<std::string> families;
  std::vector<double> ps;
  EvalOptions eval;
};

/// n_min, 2 n_min, ... up to n_max inclusive.
std::vector<std::size_t> doubling_schedule(std::size_t n_min, std::size_t n_max);

/// Throws ValidationError unless strictly increasing with every n >= 3.
void validate_schedule(const std::vector<std::size_t> &n_values);

using Cell = std::variant<std::monostate, long long, double, std::string>;

/// Tagged experiment output written as CSV with 17 significant digits.
class ResultTable {
public:
  ResultTable(std::string experiment, std::vector<std::string> columns);

  const std::string &experiment() const { return experiment_; }
  const std::vector<std::string> &columns() const { return columns_; }
  const std::vector<std::vector<Cell>> &rows() const { return rows_; }

  /// Throws std::logic_error if the width does not match the header.
  void add_row(std::vector<Cell> row);

  std::size_t column(const std::string &name) const;
  /// Numeric value of a cell; nullopt for empty or text cells.
  std::optional<double> number(std::size_t row, const std::string &name) const;
  std::string text(std::size_t row, const std::string &name) const;

  void write_csv(std::ostream &out) const;
  std::string to_csv() const;

private:
  std::string experiment_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Regular n-gon energies L^{alpha-2} E_n^{alpha,1} per (alpha, n), the
/// analytic circle row and the ratio of the largest-n value to it.
ResultTable run_table2(const ExperimentConfig &config);

/// Raw error |E - E_n|, n^{alpha-2} |E - E_n| and n^{3-alpha} |E - E_n| per n
/// with successive-ratio stability flags.
ResultTable run_error_scaling(const ExperimentConfig &config);

/// L^{alpha p - 2} E_n^{alpha,p} of regular n-gons split into even, odd and
/// power-of-two series, with argmax and monotonicity summary rows.
ResultTable run_parity_study(const ExperimentConfig &config);

/// Scale-invariant energies of seeded random equilateral n-gons against the
/// regular n-gon, plus the exact rhombus family for n = 4.
ResultTable run_minimizer_property(const ExperimentConfig &config);

/// check_assumptions verdicts over alpha = k/20, k = 1..100 for each family
/// and p, followed by the detected hold intervals.
ResultTable run_phi_report(const ExperimentConfig &config);

struct AlphaInterval {
  double lo;  // first alpha of a maximal run of `hold` verdicts
  double hi;  // last alpha of the run
};

std::vector<AlphaInterval> detect_intervals(const std::vector<double> &alphas,
                                            const std::vector<Verdict> &verdicts);

struct EquilateralSample {
  std::optional<Polygon> polygon;  // unit total length; empty when rejected
  std::size_t closure_iterations = 0;
  double closure_defect = 0.0;
  bool regular = false;  // all turning angles equal within 1e-9
};

/// Planar equilateral n-gon: turning angles 2 pi / n + sigma N(0, 1), unit
/// edges, closed by alternately spreading the closure defect over all edges
/// and renormalizing each edge. Rejected if closure does not reach 1e-10 or
/// the result is not embedded.
EquilateralSample random_equilateral_polygon(std::size_t n, double sigma, std::mt19937_64 &rng);

/// Planar rhombus of total length 1 with squared diagonals 1/8 + t and
/// 1/8 - t, |t| < 1/8.
Polygon rhombus_polygon(double t);

} // namespace ohara
