#pragma once

#include <span>
#include <vector>

#include "kglab/state.hpp"

namespace kglab {

/// A state advanced in time together with its exact first derivatives.
struct EvolutionResult {
  SpectralState state;
  ComplexArray dpsi_dt;  ///< inverse transform of -i omega_s c_s(t)
  ComplexArray dpsi_dx;  ///< inverse transform of  i k_s c_s(t)
};

/// omega(k_s) for every storage slot of the state's grid, under the state's kind.
RealArray mode_frequencies(const SpectralState& state);

/// Free evolution by `elapsed` (any sign): c_s -> c_s exp(-i omega(k_s) elapsed).
/// The returned state sits at state.time() + elapsed. Exact up to rounding.
EvolutionResult evolve(const SpectralState& state, double elapsed);

/// evolve() at each entry of `elapsed`, results in the same order. Samples are
/// independent and are spread over hardware threads.
std::vector<EvolutionResult> evolve_many(const SpectralState& state, std::span<const double> elapsed);

/// Relative L2 norm over modes of (hbar^2 omega^2 - hbar^2 c^2 k^2 - m^2 c^4) c_s(t),
/// normalized by the L2 norm of hbar^2 omega^2 c_s(t). Zero up to rounding for any
/// Klein-Gordon state on either branch. Throws KindError for Schrodinger states.
double kg_residual(const SpectralState& state, double elapsed);

/// Same residual for explicit per-slot frequencies; lets a caller probe how the
/// identity reacts to frequencies that do not come from the dispersion relation.
double kg_residual(const Grid1D& grid, const UnitSystem& units, std::span<const Complex> coefficients,
                   std::span<const double> frequencies);

}  // namespace kglab
