#include "kglab/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <thread>

#include "kglab/error.hpp"

namespace kglab {

RealArray mode_frequencies(const SpectralState& state) {
  const auto k = state.grid().wavenumbers();
  RealArray out(k.size());
  for (std::size_t s = 0; s < k.size(); ++s) out[s] = omega(state.kind(), k[s], state.units());
  return out;
}

EvolutionResult evolve(const SpectralState& state, double elapsed) {
  if (!std::isfinite(elapsed)) throw InvalidArgument("evolution time must be finite");
  const auto& grid = state.grid();
  const auto k = grid.wavenumbers();
  const auto w = mode_frequencies(state);
  const auto c0 = state.coefficients();

  ComplexArray coeffs(c0.size());
  ComplexArray dt_coeffs(c0.size());
  ComplexArray dx_coeffs(c0.size());
  for (std::size_t s = 0; s < c0.size(); ++s) {
    const Complex c = c0[s] * std::polar(1.0, -w[s] * elapsed);
    coeffs[s] = c;
    dt_coeffs[s] = Complex(0.0, -w[s]) * c;
    dx_coeffs[s] = Complex(0.0, k[s]) * c;
  }
  auto dpsi_dt = inverse_transform(grid, dt_coeffs);
  auto dpsi_dx = inverse_transform(grid, dx_coeffs);
  return {SpectralState::from_coefficients(grid, state.units(), state.kind(), std::move(coeffs),
                                           state.time() + elapsed),
          std::move(dpsi_dt), std::move(dpsi_dx)};
}

std::vector<EvolutionResult> evolve_many(const SpectralState& state, std::span<const double> elapsed) {
  std::vector<std::optional<EvolutionResult>> slots(elapsed.size());
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(1, elapsed.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < elapsed.size(); ++i) slots[i].emplace(evolve(state, elapsed[i]));
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = w; i < elapsed.size(); i += workers) slots[i].emplace(evolve(state, elapsed[i]));
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<EvolutionResult> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

double kg_residual(const Grid1D& grid, const UnitSystem& units, std::span<const Complex> coefficients,
                   std::span<const double> frequencies) {
  if (coefficients.size() != grid.size() || frequencies.size() != grid.size()) {
    throw LengthMismatch("kg_residual: coefficients and frequencies must match the grid size");
  }
  const auto k = grid.wavenumbers();
  const double hbar2 = units.hbar() * units.hbar();
  const double c2 = units.c() * units.c();
  const double rest = units.m() * c2;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t s = 0; s < coefficients.size(); ++s) {
    const double lhs = hbar2 * frequencies[s] * frequencies[s];
    const double rhs = hbar2 * c2 * k[s] * k[s] + rest * rest;
    const double weight = std::norm(coefficients[s]);
    num += (lhs - rhs) * (lhs - rhs) * weight;
    den += lhs * lhs * weight;
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

double kg_residual(const SpectralState& state, double elapsed) {
  if (!state.kind().is_klein_gordon()) {
    throw KindError("kg_residual applies to Klein-Gordon states, got " + std::string(state.kind().name()));
  }
  const auto evolved = evolve(state, elapsed);
  return kg_residual(state.grid(), state.units(), evolved.state.coefficients(),
                     mode_frequencies(evolved.state));
}

}  // namespace kglab
