#pragma once

#include <span>
#include <vector>

#include "kglab/dispersion.hpp"
#include "kglab/fourier.hpp"
#include "kglab/grid.hpp"
#include "kglab/units.hpp"

namespace kglab {

/// A normalized wavefunction on a periodic grid, held in both representations.
///
/// values()[i] is psi(x_i) and coefficients()[s] is the amplitude of exp(i k_s x),
/// the two related by the transforms in fourier.hpp. The dispersion kind decides
/// how the coefficients rotate in time. Instances are immutable.
class SpectralState {
 public:
  /// Tolerance on |sum |psi|^2 dx - 1| accepted at construction.
  static constexpr double kNormTolerance = 1e-10;
  /// Largest admissible |c_nyquist| relative to the spectral norm.
  static constexpr double kNyquistTolerance = 1e-10;

  /// Throws LengthMismatch, InvalidArgument (not normalized) or BandwidthError (Nyquist mode occupied).
  static SpectralState from_coefficients(Grid1D grid, UnitSystem units, DispersionKind kind,
                                         ComplexArray coefficients, double time = 0.0);
  /// Same checks as from_coefficients.
  static SpectralState from_values(Grid1D grid, UnitSystem units, DispersionKind kind,
                                   ComplexArray values, double time = 0.0);

  const Grid1D& grid() const noexcept { return grid_; }
  const UnitSystem& units() const noexcept { return units_; }
  DispersionKind kind() const noexcept { return kind_; }
  double time() const noexcept { return time_; }

  std::span<const Complex> values() const noexcept { return values_; }
  std::span<const Complex> coefficients() const noexcept { return coefficients_; }

  /// sqrt(L) c_s: for a mode superposition these are the a_j, with sum |a_j|^2 = 1.
  ComplexArray mode_amplitudes() const;
  /// L |c_s|^2, summing to one.
  RealArray spectral_weights() const;

  /// Weighted mean of k over the spectral weights.
  double mean_wavenumber() const;

 private:
  SpectralState(Grid1D grid, UnitSystem units, DispersionKind kind, ComplexArray values,
                ComplexArray coefficients, double time);
  void validate() const;

  Grid1D grid_;
  UnitSystem units_;
  DispersionKind kind_;
  ComplexArray values_;
  ComplexArray coefficients_;
  double time_;
};

/// Gaussian envelope with a plane-wave carrier:
/// psi(x) = (2 pi sigma^2)^(-1/4) exp(-(x - x0)^2 / (4 sigma^2)) exp(i k0 x).
struct PacketSpec {
  double x0 = 0.0;
  double k0 = 0.0;
  double sigma = 1.0;

  /// Throws InvalidArgument for sigma <= 0 or non-finite fields, and BandwidthError
  /// when |x0| + 6 sigma exceeds L/2 or |k0| + 2/sigma reaches the Nyquist wavenumber.
  void validate(const Grid1D& grid) const;
};

/// One term a exp(i k x) of a discrete superposition.
struct Mode {
  Complex amplitude;
  double k;
};

/// Finite superposition of plane waves with sum |a_j|^2 = 1 and distinct k_j.
class ModeSet {
 public:
  static constexpr double kUnitarityTolerance = 1e-10;

  /// Throws InvalidArgument when empty, not unitary, or when two k_j coincide.
  explicit ModeSet(std::vector<Mode> modes);

  std::span<const Mode> modes() const noexcept { return modes_; }
  std::size_t size() const noexcept { return modes_.size(); }

 private:
  std::vector<Mode> modes_;
};

/// Samples the Gaussian in x, renormalizes the discrete sum and transforms.
SpectralState gaussian_packet(const PacketSpec& spec, const Grid1D& grid, const UnitSystem& units,
                              DispersionKind kind);

/// State whose coefficients are a_j / sqrt(L) at the lattice sites of the k_j.
/// Throws InvalidArgument for an off-lattice k_j, BandwidthError for the Nyquist site.
SpectralState superposition(const ModeSet& modes, const Grid1D& grid, const UnitSystem& units,
                            DispersionKind kind);

/// Single mode with unit amplitude; |psi|^2 = 1/L.
SpectralState plane_wave(double k, const Grid1D& grid, const UnitSystem& units, DispersionKind kind);

/// Multiplies a positive-branch Klein-Gordon state by exp(+i m c^2 t / hbar), removing the
/// rest-energy phase so the result can be set against a Schrodinger state at the same time.
/// Throws KindError for any other kind.
SpectralState rest_phase_strip(const SpectralState& state);

}  // namespace kglab
