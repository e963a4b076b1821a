#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace cuspbc {

/// Neumaier-compensated accumulator. Results are insensitive to summation
/// order down to ~1e-16 relative.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending nodes.
QuadratureRule gauss_legendre(int n);

/// Composite Simpson rule on a uniform mesh with spacing h. Falls back to the
/// trapezoid rule for the last interval when the number of intervals is odd.
double simpson_uniform(std::span<const double> f, double h);

}  // namespace cuspbc
