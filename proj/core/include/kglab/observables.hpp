#pragma once

#include <span>

#include "kglab/dispersion.hpp"
#include "kglab/fourier.hpp"
#include "kglab/propagation.hpp"
#include "kglab/state.hpp"

namespace kglab {

// Densities and currents. Inputs are sampled fields on a common grid; every
// function throws LengthMismatch when the arrays disagree in length.

/// psi* psi
RealArray density_nonrel(std::span<const Complex> psi);

/// Klein-Gordon density  -(hbar / 2 i m c^2) [psi* d_t psi - psi d_t psi*].
/// A plane wave on the positive branch gives (hbar omega / m c^2) |psi|^2.
RealArray density_kg(std::span<const Complex> psi, std::span<const Complex> dpsi_dt, const UnitSystem& units);

/// Current  (hbar / 2 i m) [psi* d_x psi - psi d_x psi*], shared by both theories.
RealArray current_std(std::span<const Complex> psi, std::span<const Complex> dpsi_dx, const UnitSystem& units);

/// Density and current with the Lorentz factor divided out.
struct AmendedFields {
  RealArray rho;
  RealArray j;
  double gamma_bar = 1.0;
  /// False when the state's gamma spread exceeds the gate; the arrays are still filled.
  bool within_gate = true;
};

/// rho_kg / gamma_bar and j_std / gamma_bar. Throws DomainError for gamma_bar < 1.
AmendedFields amended_fields(std::span<const Complex> psi, std::span<const Complex> dpsi_dt,
                             std::span<const Complex> dpsi_dx, double gamma_bar, const UnitSystem& units);

/// As above, taking gamma_bar from `gamma` and setting within_gate from `gate`.
AmendedFields amended_fields(std::span<const Complex> psi, std::span<const Complex> dpsi_dt,
                             std::span<const Complex> dpsi_dx, const GammaStats& gamma, const UnitSystem& units,
                             const GammaGate& gate = {});

/// Every density/current definition evaluated on one evolved state.
///
/// The amended fields and gamma statistics are only defined for positive-branch
/// Klein-Gordon states; for other kinds they are NaN and gamma_spread_flag is set.
struct DensityCurrentFields {
  RealArray rho_nonrel;
  RealArray rho_kg;
  RealArray rho_amended;
  RealArray j_std;
  RealArray j_amended;
  double gamma_bar = 1.0;
  double gamma_spread = 0.0;        ///< relative spread, stddev / mean
  bool gamma_spread_flag = false;   ///< amended fields outside their validity gate
};

DensityCurrentFields compute_fields(const EvolutionResult& evolved, const GammaGate& gate = {});

/// Continuity mismatch max_i |d_t rho + d_x j|.
///
/// `raw` is in density-per-time units; `normalized` multiplies by L / max|j|, or by
/// L / (c max|rho|) when the current vanishes identically.
struct ContinuityResidual {
  double raw = 0.0;
  double normalized = 0.0;
};

/// d_t rho from the centered difference (rho_after - rho_before) / (2 dt); d_x j spectral.
/// Throws InvalidArgument for dt <= 0.
ContinuityResidual continuity_residual(std::span<const double> rho_before, std::span<const double> rho_after,
                                       std::span<const double> current, double dt, const Grid1D& grid,
                                       const UnitSystem& units);

/// Residuals of the three density/current pairings at one state.
///
/// Each entry is NaN where the pairing does not apply: kg needs a Klein-Gordon
/// state, amended a positive-branch one, nonrel a Schrodinger one.
struct ContinuityReport {
  double dt = 0.0;
  ContinuityResidual kg;       ///< (rho_kg, j_std)
  ContinuityResidual amended;  ///< (rho_amended, j_amended)
  ContinuityResidual nonrel;   ///< (psi* psi, j_std)
};

ContinuityReport check_continuity(const SpectralState& state, double dt, const GammaGate& gate = {});

/// Klein-Gordon density of a mode superposition evaluated term by term from the
/// amplitudes: (hbar / m c^2 L) sum_j omega_j (|a_j|^2 + sum_{k != j} |a_j a_k| cos phi_jk)
/// with phi_jk the phase difference of terms j and k at (x, t).
struct SuperpositionDensity {
  RealArray rho;
  double min = 0.0;
  double argmin_x = 0.0;
};

SuperpositionDensity superposition_density(const ModeSet& modes, double t, const Grid1D& grid,
                                           const UnitSystem& units,
                                           DispersionKind kind = DispersionKind::klein_gordon());

/// Two interfering modes with |a1|^2 + |a2|^2 = 1 and frequencies at or above the rest frequency.
struct TwoModeSpec {
  Complex a1;
  Complex a2;
  double omega1 = 1.0;
  double omega2 = 1.0;

  /// Throws InvalidArgument (unitarity) or DomainError (frequency below rest).
  void validate(const UnitSystem& units) const;
};

/// (hbar / m c^2) [omega1 (|a1|^2 + |a1 a2| cos phi) + omega2 (|a2|^2 + |a1 a2| cos phi)]
double two_mode_density(const TwoModeSpec& spec, double phase_difference, const UnitSystem& units);

/// Minimum of two_mode_density over the phase difference, reached at cos phi = -1.
/// Negative whenever the smaller-amplitude mode dominates the frequency weighting.
double two_mode_min_density(const TwoModeSpec& spec, const UnitSystem& units);

struct Moments {
  double norm = 0.0;
  double centroid = 0.0;
  double variance = 0.0;
};

/// Norm, mean and variance of a nonnegative density by direct Riemann sums.
///
/// The mean is located first as a circular mean on the periodic box, then refined
/// as the ordinary first moment of positions unwrapped around it, so a packet
/// straddling the boundary is handled. The centroid is reported in [-L/2, L/2).
/// Throws DomainError when the density does not integrate to a positive value.
Moments moments(std::span<const double> rho, const Grid1D& grid);

/// ||a - b||_2 / ||b||_2
double relative_l2_difference(std::span<const double> a, std::span<const double> b);
double relative_l2_difference(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace kglab
