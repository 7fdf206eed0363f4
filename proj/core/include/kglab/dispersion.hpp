#pragma once

#include <string_view>

#include "kglab/units.hpp"

namespace kglab {

class SpectralState;

/// Which dispersion relation omega(k) a state evolves under.
///
/// The physical choices are the positive-frequency Klein-Gordon branch and the
/// Schrodinger relation. The negative Klein-Gordon branch can only be obtained
/// through unphysical_negative_branch(), and exists to show what goes wrong
/// when it is admitted: APIs that interpret a state physically reject it.
class DispersionKind {
 public:
  enum class Branch { KleinGordonPositive, KleinGordonNegative, Schrodinger };

  static constexpr DispersionKind klein_gordon() { return DispersionKind(Branch::KleinGordonPositive); }
  static constexpr DispersionKind schrodinger() { return DispersionKind(Branch::Schrodinger); }
  /// Negative-energy Klein-Gordon branch, for demonstrations only.
  static constexpr DispersionKind unphysical_negative_branch() {
    return DispersionKind(Branch::KleinGordonNegative);
  }

  constexpr Branch branch() const noexcept { return branch_; }
  constexpr bool is_klein_gordon() const noexcept { return branch_ != Branch::Schrodinger; }
  constexpr bool is_physical() const noexcept { return branch_ != Branch::KleinGordonNegative; }

  std::string_view name() const noexcept;

  friend constexpr bool operator==(DispersionKind, DispersionKind) = default;

 private:
  constexpr explicit DispersionKind(Branch b) : branch_(b) {}
  Branch branch_;
};

/// Angular frequency of the plane wave exp(i(kx - omega t)).
///
/// Klein-Gordon: +/- sqrt(c^2 k^2 + (m c^2/hbar)^2). Schrodinger: hbar k^2 / 2m.
double omega(DispersionKind kind, double k, const UnitSystem& units);

/// d omega / dk. Throws BranchError for the negative Klein-Gordon branch.
double group_velocity(DispersionKind kind, double k, const UnitSystem& units);

/// Lorentz factor hbar omega / (m c^2). Throws DomainError below the rest frequency.
double gamma_of_omega(double omega, const UnitSystem& units);

/// Spread of the Lorentz factor over the spectral weights of a state.
struct GammaStats {
  double mean = 1.0;    ///< sum_j w_j gamma(omega_j)
  double stddev = 0.0;  ///< weighted standard deviation
  double relative_spread() const noexcept { return stddev / mean; }
};

/// Threshold on relative_spread() beyond which the gamma-amended density and
/// current are still computed but flagged as outside their range of validity.
struct GammaGate {
  double max_relative_spread = 0.01;
  bool accepts(const GammaStats& g) const noexcept { return g.relative_spread() <= max_relative_spread; }
};

/// Weighted mean and spread of gamma over the normalized spectral weights of a
/// positive-branch Klein-Gordon state. Throws KindError for any other kind.
GammaStats gamma_of_state(const SpectralState& state);

}  // namespace kglab
