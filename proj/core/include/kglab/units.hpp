#pragma once

namespace kglab {

/// The constants hbar, c and m that fix every scale in the library.
///
/// All three are strictly positive and finite. Natural units (hbar = c = m = 1)
/// are what the shipped scenarios use, but nothing assumes them.
class UnitSystem {
 public:
  /// Throws InvalidArgument unless all three constants are positive and finite.
  UnitSystem(double hbar, double c, double m);

  static UnitSystem natural() { return {1.0, 1.0, 1.0}; }

  double hbar() const noexcept { return hbar_; }
  double c() const noexcept { return c_; }
  double m() const noexcept { return m_; }

  /// Rest frequency m c^2 / hbar, the lower edge of the physical spectrum.
  double compton_omega() const noexcept { return compton_omega_; }

  /// Compton wavenumber m c / hbar.
  double compton_k() const noexcept { return m_ * c_ / hbar_; }

  friend bool operator==(const UnitSystem&, const UnitSystem&) = default;

 private:
  double hbar_;
  double c_;
  double m_;
  double compton_omega_;
};

}  // namespace kglab
