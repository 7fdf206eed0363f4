#include "kglab/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "kglab/error.hpp"

namespace kglab {

Grid1D::Grid1D(std::size_t n, double length) {
  if (n < 8 || !std::has_single_bit(n)) {
    throw InvalidArgument("grid size must be a power of two >= 8, got " + std::to_string(n));
  }
  if (!std::isfinite(length) || length <= 0.0) {
    throw InvalidArgument("grid length must be positive and finite");
  }
  auto data = std::make_shared<Data>();
  data->n = n;
  data->length = length;
  data->points.resize(n);
  data->wavenumbers.resize(n);
  const double dx = length / static_cast<double>(n);
  const double dk = 2.0 * std::numbers::pi / length;
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t i = 0; i < n; ++i) {
    data->points[i] = -0.5 * length + static_cast<double>(i) * dx;
    const auto s = static_cast<std::ptrdiff_t>(i);
    const std::ptrdiff_t j = s < half ? s : s - static_cast<std::ptrdiff_t>(n);
    data->wavenumbers[i] = dk * static_cast<double>(j);
  }
  data_ = std::move(data);
}

double Grid1D::dk() const noexcept { return 2.0 * std::numbers::pi / data_->length; }

double Grid1D::k_max() const noexcept {
  return std::numbers::pi * static_cast<double>(data_->n) / data_->length;
}

std::ptrdiff_t Grid1D::mode_number(std::size_t slot) const noexcept {
  const auto s = static_cast<std::ptrdiff_t>(slot);
  const auto n = static_cast<std::ptrdiff_t>(data_->n);
  return s < n / 2 ? s : s - n;
}

std::size_t Grid1D::slot_of(std::ptrdiff_t mode) const {
  const auto n = static_cast<std::ptrdiff_t>(data_->n);
  if (mode < -n / 2 || mode >= n / 2) {
    throw InvalidArgument("mode number " + std::to_string(mode) + " outside [-n/2, n/2)");
  }
  return static_cast<std::size_t>(mode >= 0 ? mode : mode + n);
}

std::optional<std::size_t> Grid1D::slot_of_wavenumber(double k, double rel_tol) const {
  if (!std::isfinite(k)) return std::nullopt;
  const double j = k / dk();
  const double nearest = std::round(j);
  if (std::abs(j - nearest) > rel_tol * std::max(1.0, std::abs(nearest))) return std::nullopt;
  const auto n = static_cast<double>(data_->n);
  if (nearest < -n / 2 || nearest >= n / 2) return std::nullopt;
  return slot_of(static_cast<std::ptrdiff_t>(nearest));
}

}  // namespace kglab
