#include "cuspbc/coalescence.hpp"

#include <cmath>
#include <string>

#include "cuspbc/errors.hpp"

namespace cuspbc {

void CoalescencePair::validate() const {
  if (!(m1 > 0.0) || !(m2 > 0.0)) {
    throw DomainError("coalescence pair: masses must be positive");
  }
  if (std::isinf(m1) && std::isinf(m2)) {
    throw DomainError("coalescence pair: at most one mass may be infinite");
  }
  if (!std::isfinite(q1) || !std::isfinite(q2)) {
    throw DomainError("coalescence pair: charges must be finite");
  }
  if (spin_channel && !(q1 == -1.0 && q2 == -1.0 && m1 == 1.0 && m2 == 1.0)) {
    throw DomainError("coalescence pair: spin channel requires two electrons");
  }
}

double CoalescencePair::reduced_mass() const {
  if (std::isinf(m1)) return m2;
  if (std::isinf(m2)) return m1;
  return m1 * m2 / (m1 + m2);
}

double CoalescencePair::position_factor1() const {
  if (std::isinf(m1)) return 0.0;
  if (std::isinf(m2)) return 1.0;
  return m2 / (m1 + m2);
}

double CoalescencePair::position_factor2() const {
  if (std::isinf(m1)) return 1.0;
  if (std::isinf(m2)) return 0.0;
  return m1 / (m1 + m2);
}

void CoalescencePair::check_ell(int ell) const {
  if (ell < 0) throw DomainError("ell must be non-negative");
  if (!spin_channel) return;
  const bool even = ell % 2 == 0;
  if (*spin_channel == SpinChannel::singlet && !even) {
    throw ParityError("singlet electron pairs allow only even ell, got " +
                      std::to_string(ell));
  }
  if (*spin_channel == SpinChannel::triplet && even) {
    throw ParityError("triplet electron pairs allow only odd ell, got " +
                      std::to_string(ell));
  }
}

double nucleus_mass(int Z, int A) {
  if (Z < 1 || A < Z) throw DomainError("nucleus needs 1 <= Z <= A");
  return Z * kProtonMass + (A - Z) * kNeutronMass;
}

CoalescencePair electron_nucleus(double Z, std::optional<int> A) {
  if (!(Z > 0.0)) throw DomainError("nuclear charge must be positive");
  CoalescencePair p;
  p.q1 = -1.0;
  p.q2 = Z;
  p.m1 = 1.0;
  if (A) {
    if (Z != std::floor(Z)) {
      throw DomainError("a mass number needs an integer nuclear charge");
    }
    p.m2 = nucleus_mass(static_cast<int>(Z), *A);
  } else {
    p.m2 = kInfiniteMass;
  }
  return p;
}

CoalescencePair electron_electron(std::optional<SpinChannel> channel) {
  CoalescencePair p;
  p.q1 = -1.0;
  p.q2 = -1.0;
  p.m1 = 1.0;
  p.m2 = 1.0;
  p.spin_channel = channel;
  return p;
}

}  // namespace cuspbc
