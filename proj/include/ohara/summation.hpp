#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace ohara {

/// Neumaier's variant of Kahan compensated summation. The compensation term
/// also captures the low-order bits when the addend dominates the running sum.
class CompensatedSum {
public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  CompensatedSum &operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    return *this;
  }

  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Pairwise (tree) reduction in index order. The association pattern depends
/// only on values.size(), never on how the values were produced.
double pairwise_sum(std::span<const double> values);

} // namespace ohara
