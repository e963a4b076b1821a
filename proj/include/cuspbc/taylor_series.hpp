#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace cuspbc {

/// Truncated power series sum_k c_k r^k, k = 0..order. T may be double or an
/// exact rational type.
template <class T>
class TaylorSeries {
 public:
  explicit TaylorSeries(int order) : c_(static_cast<std::size_t>(order) + 1, T(0)) {}

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const T& operator[](int k) const { return c_[k]; }
  T& operator[](int k) { return c_[k]; }

  /// c r^power.
  static TaylorSeries monomial(const T& c, int power, int order) {
    TaylorSeries s(order);
    if (power >= 0 && power <= order) s[power] = c;
    return s;
  }

  /// e^{a r}.
  static TaylorSeries exp_linear(const T& a, int order) {
    TaylorSeries s(order);
    T term(1);
    for (int k = 0; k <= order; ++k) {
      s[k] = term;
      term = term * a / T(k + 1);
    }
    return s;
  }

  /// e^{-g r^2}.
  static TaylorSeries exp_quadratic(const T& g, int order) {
    TaylorSeries s(order);
    T term(1);
    for (int m = 0; 2 * m <= order; ++m) {
      s[2 * m] = term;
      term = -term * g / T(m + 1);
    }
    return s;
  }

  TaylorSeries& operator+=(const TaylorSeries& o) {
    for (int k = 0; k <= std::min(order(), o.order()); ++k) c_[k] += o.c_[k];
    return *this;
  }

  friend TaylorSeries operator*(const TaylorSeries& x, const TaylorSeries& y) {
    const int n = std::min(x.order(), y.order());
    TaylorSeries out(n);
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; i + j <= n; ++j) out.c_[i + j] += x.c_[i] * y.c_[j];
    }
    return out;
  }

 private:
  std::vector<T> c_;
};

}  // namespace cuspbc
