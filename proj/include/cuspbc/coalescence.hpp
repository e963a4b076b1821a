#pragma once

#include <limits>
#include <optional>

namespace cuspbc {

enum class SpinChannel { singlet, triplet };

/// Mass sentinel for a particle held fixed (infinite mass).
inline constexpr double kInfiniteMass = std::numeric_limits<double>::infinity();

/// Proton and neutron masses in electron-mass units.
inline constexpr double kProtonMass = 1836.152673;
inline constexpr double kNeutronMass = 1838.683662;

/// Two particles whose coalescence is studied. Charges in units of e, masses
/// in electron masses; either mass may be kInfiniteMass (not both).
struct CoalescencePair {
  double q1 = -1.0;
  double q2 = 1.0;
  double m1 = 1.0;
  double m2 = kInfiniteMass;
  std::optional<SpinChannel> spin_channel;

  /// Throws DomainError on non-positive masses, two infinite masses, or a
  /// spin channel attached to a pair that is not electron-electron.
  void validate() const;

  double reduced_mass() const;
  double charge_product() const { return q1 * q2; }
  /// alpha = M q1 q2.
  double alpha() const { return reduced_mass() * charge_product(); }

  /// Position factors: particle 1 sits at +f1 r e, particle 2 at -f2 r e
  /// relative to the pair's center of mass. f1 = m2/(m1+m2), f2 = m1/(m1+m2).
  double position_factor1() const;
  double position_factor2() const;

  /// Throws ParityError when ell is not allowed by the spin channel.
  void check_ell(int ell) const;
};

/// Mass of a nucleus with Z protons and A - Z neutrons.
double nucleus_mass(int Z, int A);

/// Electron (particle 1) and nucleus of charge Z (particle 2). Without A the
/// nucleus is fixed (infinite mass).
CoalescencePair electron_nucleus(double Z, std::optional<int> A = std::nullopt);

CoalescencePair electron_electron(std::optional<SpinChannel> channel = std::nullopt);

}  // namespace cuspbc
