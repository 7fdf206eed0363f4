#include "kglab/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "kglab/error.hpp"

namespace kglab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw LengthMismatch(std::string(what) + ": arrays of length " + std::to_string(a) + " and " +
                         std::to_string(b));
  }
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// -(scale / 2i) [psi* d psi - psi d psi*]; the bracket is purely imaginary.
RealArray bilinear_imag(std::span<const Complex> psi, std::span<const Complex> dpsi, double scale) {
  RealArray out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const Complex a = std::conj(psi[i]) * dpsi[i];
    const Complex bracket = a - std::conj(a);
    const Complex value = bracket * Complex(0.0, 0.5 * scale);
    out[i] = value.real();
  }
  return out;
}

RealArray filled(std::size_t n, double v) { return RealArray(n, v); }

}  // namespace

RealArray density_nonrel(std::span<const Complex> psi) {
  RealArray out(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) out[i] = std::norm(psi[i]);
  return out;
}

RealArray density_kg(std::span<const Complex> psi, std::span<const Complex> dpsi_dt, const UnitSystem& units) {
  require_same_length(psi.size(), dpsi_dt.size(), "density_kg");
  // -(1/2i) = i/2, so rho = (hbar / m c^2) * (i/2) * bracket.
  return bilinear_imag(psi, dpsi_dt, units.hbar() / (units.m() * units.c() * units.c()));
}

RealArray current_std(std::span<const Complex> psi, std::span<const Complex> dpsi_dx, const UnitSystem& units) {
  require_same_length(psi.size(), dpsi_dx.size(), "current_std");
  // (1/2i) = -i/2.
  return bilinear_imag(psi, dpsi_dx, -units.hbar() / units.m());
}

AmendedFields amended_fields(std::span<const Complex> psi, std::span<const Complex> dpsi_dt,
                             std::span<const Complex> dpsi_dx, double gamma_bar, const UnitSystem& units) {
  if (!(gamma_bar >= 1.0)) {
    throw DomainError("gamma_bar must be >= 1, got " + std::to_string(gamma_bar));
  }
  AmendedFields out;
  out.rho = density_kg(psi, dpsi_dt, units);
  out.j = current_std(psi, dpsi_dx, units);
  for (auto& r : out.rho) r /= gamma_bar;
  for (auto& j : out.j) j /= gamma_bar;
  out.gamma_bar = gamma_bar;
  return out;
}

AmendedFields amended_fields(std::span<const Complex> psi, std::span<const Complex> dpsi_dt,
                             std::span<const Complex> dpsi_dx, const GammaStats& gamma, const UnitSystem& units,
                             const GammaGate& gate) {
  auto out = amended_fields(psi, dpsi_dt, dpsi_dx, gamma.mean, units);
  out.within_gate = gate.accepts(gamma);
  return out;
}

DensityCurrentFields compute_fields(const EvolutionResult& evolved, const GammaGate& gate) {
  const auto& state = evolved.state;
  const auto psi = state.values();
  DensityCurrentFields out;
  out.rho_nonrel = density_nonrel(psi);
  out.rho_kg = density_kg(psi, evolved.dpsi_dt, state.units());
  out.j_std = current_std(psi, evolved.dpsi_dx, state.units());
  if (state.kind() == DispersionKind::klein_gordon()) {
    const auto gamma = gamma_of_state(state);
    out.gamma_bar = gamma.mean;
    out.gamma_spread = gamma.relative_spread();
    out.gamma_spread_flag = !gate.accepts(gamma);
    out.rho_amended = out.rho_kg;
    out.j_amended = out.j_std;
    for (auto& r : out.rho_amended) r /= gamma.mean;
    for (auto& j : out.j_amended) j /= gamma.mean;
  } else {
    out.gamma_bar = kNaN;
    out.gamma_spread = kNaN;
    out.gamma_spread_flag = true;
    out.rho_amended = filled(psi.size(), kNaN);
    out.j_amended = filled(psi.size(), kNaN);
  }
  return out;
}

ContinuityResidual continuity_residual(std::span<const double> rho_before, std::span<const double> rho_after,
                                       std::span<const double> current, double dt, const Grid1D& grid,
                                       const UnitSystem& units) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("continuity dt must be positive and finite");
  require_same_length(rho_before.size(), grid.size(), "continuity_residual rho_before");
  require_same_length(rho_after.size(), grid.size(), "continuity_residual rho_after");
  require_same_length(current.size(), grid.size(), "continuity_residual current");

  const auto dj_dx = spectral_derivative(grid, current);
  double raw = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double drho_dt = (rho_after[i] - rho_before[i]) / (2.0 * dt);
    raw = std::max(raw, std::abs(drho_dt + dj_dx[i]));
  }
  const double j_scale = max_abs(current);
  const double rho_scale = 0.5 * (max_abs(rho_before) + max_abs(rho_after)) * units.c();
  const double scale = j_scale > 1e-12 * rho_scale ? j_scale : rho_scale;
  return {raw, scale > 0.0 ? raw * grid.length() / scale : 0.0};
}

ContinuityReport check_continuity(const SpectralState& state, double dt, const GammaGate& gate) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("continuity dt must be positive and finite");
  const double steps[] = {-dt, 0.0, dt};
  const auto evolved = evolve_many(state, steps);
  const auto before = compute_fields(evolved[0], gate);
  const auto now = compute_fields(evolved[1], gate);
  const auto after = compute_fields(evolved[2], gate);
  const auto& grid = state.grid();
  const auto& units = state.units();

  ContinuityReport report;
  report.dt = dt;
  const ContinuityResidual missing{kNaN, kNaN};
  report.kg = state.kind().is_klein_gordon()
                  ? continuity_residual(before.rho_kg, after.rho_kg, now.j_std, dt, grid, units)
                  : missing;
  report.amended = state.kind() == DispersionKind::klein_gordon()
                       ? continuity_residual(before.rho_amended, after.rho_amended, now.j_amended, dt, grid, units)
                       : missing;
  report.nonrel = state.kind() == DispersionKind::schrodinger()
                      ? continuity_residual(before.rho_nonrel, after.rho_nonrel, now.j_std, dt, grid, units)
                      : missing;
  return report;
}

SuperpositionDensity superposition_density(const ModeSet& modes, double t, const Grid1D& grid,
                                           const UnitSystem& units, DispersionKind kind) {
  const auto terms = modes.modes();
  if (terms.empty()) throw InvalidArgument("superposition_density needs at least one mode");
  const std::size_t count = terms.size();
  std::vector<double> mag(count), w(count), base_phase(count);
  for (std::size_t j = 0; j < count; ++j) {
    mag[j] = std::abs(terms[j].amplitude);
    w[j] = omega(kind, terms[j].k, units);
    base_phase[j] = std::arg(terms[j].amplitude) - w[j] * t;
  }
  const double prefactor = units.hbar() / (units.m() * units.c() * units.c() * grid.length());

  SuperpositionDensity out;
  out.rho.resize(grid.size());
  std::vector<double> phase(count);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    for (std::size_t j = 0; j < count; ++j) phase[j] = base_phase[j] + terms[j].k * x;
    double sum = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      double bracket = mag[j] * mag[j];
      for (std::size_t k = 0; k < count; ++k) {
        if (k != j) bracket += mag[j] * mag[k] * std::cos(phase[j] - phase[k]);
      }
      sum += w[j] * bracket;
    }
    out.rho[i] = prefactor * sum;
  }
  const auto it = std::min_element(out.rho.begin(), out.rho.end());
  out.min = *it;
  out.argmin_x = grid.x(static_cast<std::size_t>(it - out.rho.begin()));
  return out;
}

void TwoModeSpec::validate(const UnitSystem& units) const {
  const double total = std::norm(a1) + std::norm(a2);
  if (!(std::abs(total - 1.0) <= ModeSet::kUnitarityTolerance)) {
    throw InvalidArgument("two-mode amplitudes violate unitarity: |a1|^2 + |a2|^2 = " + std::to_string(total));
  }
  const double rest = units.compton_omega() * (1.0 - 4e-16);
  if (!(omega1 >= rest) || !(omega2 >= rest)) {
    throw DomainError("two-mode frequencies must be at least the rest frequency m c^2 / hbar");
  }
}

double two_mode_density(const TwoModeSpec& spec, double phase_difference, const UnitSystem& units) {
  spec.validate(units);
  const double cross = std::abs(spec.a1) * std::abs(spec.a2) * std::cos(phase_difference);
  const double prefactor = units.hbar() / (units.m() * units.c() * units.c());
  return prefactor * (spec.omega1 * (std::norm(spec.a1) + cross) + spec.omega2 * (std::norm(spec.a2) + cross));
}

double two_mode_min_density(const TwoModeSpec& spec, const UnitSystem& units) {
  spec.validate(units);
  const double cross = std::abs(spec.a1) * std::abs(spec.a2);
  const double prefactor = units.hbar() / (units.m() * units.c() * units.c());
  return prefactor *
         (spec.omega1 * std::norm(spec.a1) + spec.omega2 * std::norm(spec.a2) - (spec.omega1 + spec.omega2) * cross);
}

Moments moments(std::span<const double> rho, const Grid1D& grid) {
  require_same_length(rho.size(), grid.size(), "moments");
  const double dx = grid.dx();
  const double length = grid.length();
  double norm = 0.0;
  Complex circular(0.0, 0.0);
  const double wave = 2.0 * std::numbers::pi / length;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    norm += rho[i];
    circular += rho[i] * std::polar(1.0, wave * grid.x(i));
  }
  norm *= dx;
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DomainError("density does not integrate to a positive value (norm = " + std::to_string(norm) + ")");
  }
  const double anchor = std::arg(circular) / wave;

  auto unwrap = [&](double x) {
    double d = x - anchor;
    d -= length * std::floor(d / length + 0.5);
    return d;
  };
  double first = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) first += rho[i] * unwrap(grid.x(i));
  first *= dx / norm;
  double second = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double d = unwrap(grid.x(i)) - first;
    second += rho[i] * d * d;
  }
  second *= dx / norm;

  double centroid = anchor + first;
  centroid -= length * std::floor(centroid / length + 0.5);
  return {norm, centroid, second};
}

double relative_l2_difference(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), "relative_l2_difference");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

double relative_l2_difference(std::span<const Complex> a, std::span<const Complex> b) {
  require_same_length(a.size(), b.size(), "relative_l2_difference");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace kglab
