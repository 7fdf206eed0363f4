#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "kglab/error.hpp"
#include "kglab/observables.hpp"
#include "kglab/propagation.hpp"
#include "oracles.hpp"

namespace kglab {
namespace {

const auto kKG = DispersionKind::klein_gordon();
const auto kKGNeg = DispersionKind::unphysical_negative_branch();
const auto kSchr = DispersionKind::schrodinger();

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

TEST(Evolve, ZeroTimeIsIdentity) {
  const auto grid = make_grid(256, 80.0);
  const auto s = gaussian_packet({3.0, 1.0, 4.0}, grid, UnitSystem::natural(), kKG);
  const auto r = evolve(s, 0.0);
  EXPECT_LE(max_abs_diff(r.state.values(), s.values()), 1e-15);
  EXPECT_EQ(r.state.time(), 0.0);
}

TEST(Evolve, PlaneWaveModulusStationaryPhaseAdvances) {
  const auto grid = make_grid(64, 2.0 * std::numbers::pi * 8.0 / 3.0);
  const UnitSystem u(1.0, 1.0, 4.0);
  const auto s = plane_wave(3.0, grid, u, kKG);
  for (double t : {0.1, 1.0, 13.7}) {
    const auto r = evolve(s, t);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_NEAR(std::abs(r.state.values()[i]), std::abs(s.values()[i]), 1e-14);
      const Complex ratio = r.state.values()[i] / s.values()[i];
      EXPECT_NEAR(std::abs(ratio - std::polar(1.0, -5.0 * t)), 0.0, 1e-12);
    }
  }
}

TEST(Evolve, NormConservedAndGroupLaw) {
  const auto grid = make_grid(1024, 200.0);
  const auto s = gaussian_packet({-30.0, 2.0, 5.0}, grid, UnitSystem(1.0, 1.0, 0.5), kKG);
  for (double t : {-40.0, 0.3, 17.0, 123.0}) {
    const auto r = evolve(s, t);
    EXPECT_NEAR(position_norm(grid, r.state.values()), 1.0, 1e-12);
    EXPECT_NEAR(r.state.time(), t, 1e-15);
  }
  const auto once = evolve(s, 7.5).state;
  const auto twice = evolve(evolve(s, 3.0).state, 4.5).state;
  EXPECT_LE(max_abs_diff(once.values(), twice.values()), 1e-11);
  const auto back = evolve(evolve(s, 19.0).state, -19.0).state;
  EXPECT_LE(max_abs_diff(back.values(), s.values()), 1e-11);
}

TEST(Evolve, DerivativesMatchSpectralDefinition) {
  const auto grid = make_grid(128, 40.0);
  std::mt19937_64 rng(3);
  const auto c = oracle::random_coefficients(128, 40.0, rng, 20);
  const UnitSystem u(1.0, 2.0, 1.5);
  const auto s = SpectralState::from_coefficients(grid, u, kKG, c);
  const double t = 0.8;
  const auto r = evolve(s, t);
  // Central finite difference in t of brute-force mode sums.
  std::vector<double> k(grid.wavenumbers().begin(), grid.wavenumbers().end());
  std::vector<double> w(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) w[j] = oracle::omega_ref(+1, k[j], 1.0, 2.0, 1.5);
  for (std::size_t i = 0; i < grid.size(); i += 9) {
    const double x = grid.x(i);
    Complex dt(0, 0), dx(0, 0);
    for (std::size_t j = 0; j < k.size(); ++j) {
      const Complex term = c[j] * std::polar(1.0, k[j] * x - w[j] * t);
      dt += Complex(0, -w[j]) * term;
      dx += Complex(0, k[j]) * term;
    }
    EXPECT_NEAR(std::abs(r.dpsi_dt[i] - dt), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(r.dpsi_dx[i] - dx), 0.0, 1e-10);
  }
}

TEST(Evolve, MatchesBruteForceModeSum) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t n : {8u, 16u, 32u, 64u}) {
    for (auto kind : {kKG, kKGNeg, kSchr}) {
      const double length = 5.0 + 10.0 * std::abs(unif(rng));
      const auto grid = make_grid(n, length);
      const UnitSystem u(1.0, 1.0 + std::abs(unif(rng)), 0.5 + std::abs(unif(rng)));
      const auto c = oracle::random_coefficients(n, length, rng);
      const auto s = SpectralState::from_coefficients(grid, u, kind, c);
      std::vector<double> k(grid.wavenumbers().begin(), grid.wavenumbers().end());
      std::vector<double> w(n);
      const int sign = kind == kKG ? 1 : kind == kKGNeg ? -1 : 0;
      for (std::size_t j = 0; j < n; ++j) w[j] = oracle::omega_ref(sign, k[j], u.hbar(), u.c(), u.m());
      for (int sample = 0; sample < 10; ++sample) {
        const std::size_t i = static_cast<std::size_t>(std::abs(unif(rng)) * (n - 1));
        const double t = 10.0 * unif(rng);
        const auto r = evolve(s, t);
        const auto expected = oracle::mode_sum(c, k, w, grid.x(i), t);
        EXPECT_NEAR(std::abs(r.state.values()[i] - expected), 0.0, 1e-10);
      }
    }
  }
}

TEST(Evolve, ManyMatchesSequential) {
  const auto grid = make_grid(512, 100.0);
  const auto s = gaussian_packet({0.0, 1.0, 5.0}, grid, UnitSystem::natural(), kKG);
  const std::vector<double> times = {0.0, 1.0, 2.5, -3.0, 10.0, 11.0, 12.0};
  const auto batch = evolve_many(s, times);
  ASSERT_EQ(batch.size(), times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto single = evolve(s, times[i]);
    EXPECT_EQ(batch[i].state.time(), times[i]);
    EXPECT_LE(max_abs_diff(batch[i].state.values(), single.state.values()), 0.0);
  }
}

TEST(Evolve, VarianceNonDecreasing) {
  const auto grid = make_grid(2048, 400.0);
  const auto s = gaussian_packet({-60.0, 1.0, 2.0}, grid, UnitSystem::natural(), kKG);
  double previous = 0.0;
  for (double t = 0.0; t <= 60.0; t += 5.0) {
    const double var = moments(density_nonrel(evolve(s, t).state.values()), grid).variance;
    EXPECT_GE(var, previous - 1e-12);
    previous = var;
  }
  EXPECT_GT(previous, 4.0 * 1.01);
}

TEST(KgResidual, ZeroOnBothBranches) {
  const auto grid = make_grid(1024, 200.0);
  const UnitSystem u(1.0, 1.0, 4.0);
  EXPECT_LE(kg_residual(gaussian_packet({0.0, 3.0, 10.0}, grid, u, kKG), 2.0), 1e-12);
  EXPECT_LE(kg_residual(plane_wave(grid.k(40), grid, u, kKGNeg), 7.0), 1e-12);
  EXPECT_THROW(kg_residual(plane_wave(0.0, grid, u, kSchr), 1.0), KindError);
}

TEST(KgResidual, DetectsPerturbedFrequencies) {
  const auto grid = make_grid(512, 200.0);
  const UnitSystem u(1.0, 1.0, 4.0);
  const auto s = gaussian_packet({0.0, 3.0, 10.0}, grid, u, kKG);
  auto w = mode_frequencies(s);
  const double delta = 1e-6;
  for (auto& v : w) v += delta;
  const double r = kg_residual(grid, u, s.coefficients(), w);
  // (omega + d)^2 - omega^2 = 2 omega d + d^2, so the relative residual is ~2 d / omega.
  double num = 0.0, den = 0.0;
  const auto c = s.coefficients();
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double om = w[j] - delta;
    num += std::norm(c[j]) * std::pow(2 * om * delta + delta * delta, 2);
    den += std::norm(c[j]) * std::pow(w[j], 4);
  }
  EXPECT_NEAR(r, std::sqrt(num / den), 1e-3 * std::sqrt(num / den));
  EXPECT_NEAR(r, 2 * delta / 5.0, 0.02 * 2 * delta / 5.0);
}

}  // namespace
}  // namespace kglab
