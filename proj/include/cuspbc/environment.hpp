#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cuspbc/coalescence.hpp"

namespace cuspbc {

/// Point charge relative to the pair's center of mass.
struct PointCharge {
  double q = 0.0;
  double r = 1.0;
  double theta = 0.0;
  double phi = 0.0;
};

struct Environment {
  std::vector<PointCharge> charges;

  /// Throws DomainError on an empty list or r <= 0.
  void validate() const;
  /// min_i r_i.
  double convergence_radius() const;
};

/// W0 = (q1 + q2) sum_i q_i / r_i.
double w0(const Environment& env, const CoalescencePair& pair);

/// Direct Cartesian sum over q_i (q1/|r1 - r_i| + q2/|r2 - r_i|) with the
/// pair separated by r along (theta, phi). SingularityError when a particle
/// comes within 1e-12 of a charge.
double w_exact(const Environment& env, const CoalescencePair& pair, double r,
               double theta, double phi);

/// Laplace expansion truncated at lambda_max. DomainError unless
/// r < 0.999 * convergence radius.
double w_multipole(const Environment& env, const CoalescencePair& pair, double r,
                   double theta, double phi, int lambda_max);

/// The single degree-lambda contribution of the expansion.
double w_multipole_term(const Environment& env, const CoalescencePair& pair,
                        double r, double theta, double phi, int lambda);

/// Pair-dependent prefactor q1 f1^lambda + (-1)^lambda q2 f2^lambda; exactly
/// zero for odd lambda when the particles are identical.
double multipole_pair_factor(const CoalescencePair& pair, int lambda);

/// Spherical average of w_exact at fixed r: Gauss-Legendre in cos(theta)
/// times a uniform trapezoid in phi.
double spherical_average_w(const Environment& env, const CoalescencePair& pair,
                           double r, int n_theta = 64, int n_phi = 128);

/// `{"charges": [{"q": .., "r": .., "theta": .., "phi": ..}, ...]}`.
Environment parse_environment_json(const std::string& text);
Environment read_environment_json(std::istream& is);
std::string environment_to_json(const Environment& env);

}  // namespace cuspbc
