#include "kglab/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kglab/error.hpp"
#include "kglab/state.hpp"

namespace kglab {

std::string_view DispersionKind::name() const noexcept {
  switch (branch_) {
    case Branch::KleinGordonPositive:
      return "klein-gordon";
    case Branch::KleinGordonNegative:
      return "klein-gordon-negative";
    case Branch::Schrodinger:
      return "schrodinger";
  }
  return "unknown";
}

double omega(DispersionKind kind, double k, const UnitSystem& units) {
  switch (kind.branch()) {
    case DispersionKind::Branch::KleinGordonPositive:
      return std::hypot(units.c() * k, units.compton_omega());
    case DispersionKind::Branch::KleinGordonNegative:
      return -std::hypot(units.c() * k, units.compton_omega());
    case DispersionKind::Branch::Schrodinger:
      return units.hbar() * k * k / (2.0 * units.m());
  }
  return 0.0;
}

double group_velocity(DispersionKind kind, double k, const UnitSystem& units) {
  switch (kind.branch()) {
    case DispersionKind::Branch::KleinGordonPositive:
      return units.c() * units.c() * k / omega(kind, k, units);
    case DispersionKind::Branch::KleinGordonNegative:
      throw BranchError("no group velocity is reported for the negative-energy branch");
    case DispersionKind::Branch::Schrodinger:
      return units.hbar() * k / units.m();
  }
  return 0.0;
}

double gamma_of_omega(double omega, const UnitSystem& units) {
  const double rest = units.compton_omega();
  // Allow a few ulps of slack so omega(k = 0) round-trips to exactly 1.
  if (!(omega >= rest * (1.0 - 4e-16))) {
    throw DomainError("omega = " + std::to_string(omega) + " is below the rest frequency " +
                      std::to_string(rest));
  }
  return std::max(1.0, omega / rest);
}

GammaStats gamma_of_state(const SpectralState& state) {
  if (state.kind() != DispersionKind::klein_gordon()) {
    throw KindError("gamma_of_state needs a positive-branch Klein-Gordon state, got " +
                    std::string(state.kind().name()));
  }
  const auto& grid = state.grid();
  const auto coeffs = state.coefficients();
  const auto k = grid.wavenumbers();
  double total = 0.0;
  double first = 0.0;
  for (std::size_t s = 0; s < coeffs.size(); ++s) {
    const double w = std::norm(coeffs[s]);
    total += w;
    first += w * gamma_of_omega(omega(state.kind(), k[s], state.units()), state.units());
  }
  const double mean = first / total;
  double second = 0.0;
  for (std::size_t s = 0; s < coeffs.size(); ++s) {
    const double w = std::norm(coeffs[s]);
    const double d = gamma_of_omega(omega(state.kind(), k[s], state.units()), state.units()) - mean;
    second += w * d * d;
  }
  return {mean, std::sqrt(second / total)};
}

}  // namespace kglab
