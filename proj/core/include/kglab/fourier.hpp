#pragma once

#include <complex>
#include <span>
#include <vector>

#include "kglab/grid.hpp"

namespace kglab {

using Complex = std::complex<double>;
using ComplexArray = std::vector<Complex>;
using RealArray = std::vector<double>;

// Transform convention, with x_i and k_s taken from the grid:
//
//   c_s = (1/n) sum_i v_i exp(-i k_s x_i)        (forward)
//   v_i =       sum_s c_s exp(+i k_s x_i)        (inverse)
//
// so c_s is the amplitude of the plane wave exp(i k_s x) in the physical
// coordinates of the grid. Parseval reads sum_i |v_i|^2 dx = L sum_s |c_s|^2.
//
// Both transforms are pure and may be called concurrently.

/// Throws LengthMismatch if values.size() != grid.size().
ComplexArray forward_transform(const Grid1D& grid, std::span<const Complex> values);
/// Throws LengthMismatch if coefficients.size() != grid.size().
ComplexArray inverse_transform(const Grid1D& grid, std::span<const Complex> coefficients);

/// sum_i |v_i|^2 dx
double position_norm(const Grid1D& grid, std::span<const Complex> values);
/// L sum_s |c_s|^2, equal to position_norm of the inverse transform.
double spectral_norm(const Grid1D& grid, std::span<const Complex> coefficients);

/// Spectral d/dx of a real periodic sample. The Nyquist mode is dropped.
RealArray spectral_derivative(const Grid1D& grid, std::span<const double> values);

}  // namespace kglab
