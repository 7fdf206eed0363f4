#include "kglab/state.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "kglab/error.hpp"

namespace kglab {

SpectralState::SpectralState(Grid1D grid, UnitSystem units, DispersionKind kind, ComplexArray values,
                             ComplexArray coefficients, double time)
    : grid_(std::move(grid)),
      units_(units),
      kind_(kind),
      values_(std::move(values)),
      coefficients_(std::move(coefficients)),
      time_(time) {}

SpectralState SpectralState::from_coefficients(Grid1D grid, UnitSystem units, DispersionKind kind,
                                               ComplexArray coefficients, double time) {
  auto values = inverse_transform(grid, coefficients);
  SpectralState state(std::move(grid), units, kind, std::move(values), std::move(coefficients), time);
  state.validate();
  return state;
}

SpectralState SpectralState::from_values(Grid1D grid, UnitSystem units, DispersionKind kind,
                                         ComplexArray values, double time) {
  auto coefficients = forward_transform(grid, values);
  SpectralState state(std::move(grid), units, kind, std::move(values), std::move(coefficients), time);
  state.validate();
  return state;
}

void SpectralState::validate() const {
  if (!std::isfinite(time_)) throw InvalidArgument("state time must be finite");
  const double norm = spectral_norm(grid_, coefficients_);
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    throw InvalidArgument("state is not normalized: sum |psi|^2 dx = " + std::to_string(norm));
  }
  const double nyquist = std::abs(coefficients_[grid_.nyquist_slot()]) * std::sqrt(grid_.length());
  if (nyquist > kNyquistTolerance) {
    throw BandwidthError("state occupies the Nyquist mode (relative amplitude " +
                         std::to_string(nyquist) + "); refine the grid or widen the packet");
  }
}

ComplexArray SpectralState::mode_amplitudes() const {
  const double root_l = std::sqrt(grid_.length());
  ComplexArray out(coefficients_.size());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = coefficients_[s] * root_l;
  return out;
}

RealArray SpectralState::spectral_weights() const {
  RealArray out(coefficients_.size());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = std::norm(coefficients_[s]) * grid_.length();
  return out;
}

double SpectralState::mean_wavenumber() const {
  const auto k = grid_.wavenumbers();
  double total = 0.0;
  double first = 0.0;
  for (std::size_t s = 0; s < coefficients_.size(); ++s) {
    const double w = std::norm(coefficients_[s]);
    total += w;
    first += w * k[s];
  }
  return first / total;
}

void PacketSpec::validate(const Grid1D& grid) const {
  if (!std::isfinite(x0) || !std::isfinite(k0) || !std::isfinite(sigma)) {
    throw InvalidArgument("packet x0, k0 and sigma must be finite");
  }
  if (sigma <= 0.0) throw InvalidArgument("packet sigma must be positive");
  if (std::abs(x0) + 6.0 * sigma > 0.5 * grid.length()) {
    throw BandwidthError("packet support |x0| + 6 sigma = " + std::to_string(std::abs(x0) + 6.0 * sigma) +
                         " exceeds half the box L/2 = " + std::to_string(0.5 * grid.length()));
  }
  if (std::abs(k0) + 2.0 / sigma >= grid.k_max()) {
    throw BandwidthError("packet spectrum |k0| + 2/sigma = " + std::to_string(std::abs(k0) + 2.0 / sigma) +
                         " reaches the Nyquist wavenumber " + std::to_string(grid.k_max()));
  }
}

ModeSet::ModeSet(std::vector<Mode> modes) : modes_(std::move(modes)) {
  if (modes_.empty()) throw InvalidArgument("mode set is empty");
  double total = 0.0;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (!std::isfinite(modes_[i].k) || !std::isfinite(modes_[i].amplitude.real()) ||
        !std::isfinite(modes_[i].amplitude.imag())) {
      throw InvalidArgument("mode " + std::to_string(i) + " has a non-finite entry");
    }
    total += std::norm(modes_[i].amplitude);
    for (std::size_t j = 0; j < i; ++j) {
      if (modes_[j].k == modes_[i].k) {
        throw InvalidArgument("modes " + std::to_string(j) + " and " + std::to_string(i) +
                              " share the wavenumber " + std::to_string(modes_[i].k));
      }
    }
  }
  if (!(std::abs(total - 1.0) <= kUnitarityTolerance)) {
    throw InvalidArgument("mode amplitudes violate unitarity: sum |a_j|^2 = " + std::to_string(total) +
                          ", expected 1");
  }
}

SpectralState gaussian_packet(const PacketSpec& spec, const Grid1D& grid, const UnitSystem& units,
                              DispersionKind kind) {
  spec.validate(grid);
  const double amplitude = 1.0 / std::sqrt(std::sqrt(2.0 * std::numbers::pi) * spec.sigma);
  const double inv_four_var = 1.0 / (4.0 * spec.sigma * spec.sigma);
  ComplexArray values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = grid.x(i);
    const double d = x - spec.x0;
    values[i] = amplitude * std::exp(-d * d * inv_four_var) * std::polar(1.0, spec.k0 * x);
  }
  const double scale = 1.0 / std::sqrt(position_norm(grid, values));
  for (auto& v : values) v *= scale;
  return SpectralState::from_values(grid, units, kind, std::move(values));
}

SpectralState superposition(const ModeSet& modes, const Grid1D& grid, const UnitSystem& units,
                            DispersionKind kind) {
  ComplexArray coeffs(grid.size(), Complex(0.0, 0.0));
  std::vector<bool> used(grid.size(), false);
  const double inv_root_l = 1.0 / std::sqrt(grid.length());
  for (const auto& mode : modes.modes()) {
    const auto slot = grid.slot_of_wavenumber(mode.k);
    if (!slot) {
      throw InvalidArgument("mode wavenumber " + std::to_string(mode.k) +
                            " is not on the grid lattice 2 pi j / L");
    }
    if (*slot == grid.nyquist_slot() && mode.amplitude != Complex(0.0, 0.0)) {
      throw BandwidthError("mode wavenumber " + std::to_string(mode.k) + " is the Nyquist mode");
    }
    if (used[*slot]) throw InvalidArgument("two modes land on the same lattice site");
    used[*slot] = true;
    coeffs[*slot] = mode.amplitude * inv_root_l;
  }
  return SpectralState::from_coefficients(grid, units, kind, std::move(coeffs));
}

SpectralState plane_wave(double k, const Grid1D& grid, const UnitSystem& units, DispersionKind kind) {
  return superposition(ModeSet({Mode{Complex(1.0, 0.0), k}}), grid, units, kind);
}

SpectralState rest_phase_strip(const SpectralState& state) {
  if (state.kind() != DispersionKind::klein_gordon()) {
    throw KindError("rest_phase_strip needs a positive-branch Klein-Gordon state, got " +
                    std::string(state.kind().name()));
  }
  const Complex phase = std::polar(1.0, state.units().compton_omega() * state.time());
  auto coeffs = ComplexArray(state.coefficients().begin(), state.coefficients().end());
  for (auto& c : coeffs) c *= phase;
  return SpectralState::from_coefficients(state.grid(), state.units(), state.kind(), std::move(coeffs),
                                          state.time());
}

}  // namespace kglab
