#pragma once

// Taylor coefficients of e^{-beta r} 1F1(ell + 1 + alpha/beta; 2 ell + 2; 2 beta r)
// by a long-double Cauchy product of the two factor series.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

struct TaylorOracle {
  std::vector<long double> coeff;  // t_k
  std::vector<long double> scale;  // largest |product term| entering t_k
};

inline TaylorOracle kummer_taylor(int ell, double alpha, double beta_sq, int order) {
  const long double beta = std::sqrt(static_cast<long double>(beta_sq));
  const long double a = ell + 1 + alpha / beta;
  const long double b = 2.0L * ell + 2.0L;
  std::vector<long double> ex(order + 1), hyp(order + 1);
  ex[0] = 1.0L;
  hyp[0] = 1.0L;
  for (int k = 0; k < order; ++k) {
    ex[k + 1] = ex[k] * (-beta) / (k + 1);
    hyp[k + 1] = hyp[k] * (a + k) / (b + k) * (2.0L * beta) / (k + 1);
  }
  TaylorOracle out;
  out.coeff.assign(order + 1, 0.0L);
  out.scale.assign(order + 1, 0.0L);
  for (int k = 0; k <= order; ++k) {
    for (int j = 0; j <= k; ++j) {
      const long double t = hyp[j] * ex[k - j];
      out.coeff[k] += t;
      out.scale[k] = std::max(out.scale[k], std::abs(t));
    }
  }
  return out;
}

}  // namespace oracle
