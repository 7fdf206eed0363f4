#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace kglab {

/// Periodic 1D grid on [-L/2, L/2) together with its DFT-conjugate wavenumbers.
///
/// Points are x_i = -L/2 + i L/n. Wavenumbers are stored in DFT order: storage
/// slot s holds k = 2 pi j / L with j = s for s < n/2 and j = s - n otherwise,
/// so slot n/2 is the unmatched Nyquist mode j = -n/2.
///
/// Copies share the underlying arrays.
class Grid1D {
 public:
  /// Throws InvalidArgument unless n is a power of two, n >= 8 and length > 0.
  Grid1D(std::size_t n, double length);

  std::size_t size() const noexcept { return data_->n; }
  double length() const noexcept { return data_->length; }
  double dx() const noexcept { return data_->length / static_cast<double>(data_->n); }
  double dk() const noexcept;
  /// |k| of the Nyquist mode, pi n / L.
  double k_max() const noexcept;

  std::span<const double> points() const noexcept { return data_->points; }
  std::span<const double> wavenumbers() const noexcept { return data_->wavenumbers; }
  double x(std::size_t i) const { return data_->points[i]; }
  double k(std::size_t slot) const { return data_->wavenumbers[slot]; }

  std::size_t nyquist_slot() const noexcept { return data_->n / 2; }

  /// Signed mode number j of a storage slot.
  std::ptrdiff_t mode_number(std::size_t slot) const noexcept;
  /// Storage slot of signed mode number j; throws InvalidArgument outside [-n/2, n/2).
  std::size_t slot_of(std::ptrdiff_t mode) const;
  /// Slot whose wavenumber equals k to within rel_tol of the lattice spacing, if any.
  std::optional<std::size_t> slot_of_wavenumber(double k, double rel_tol = 1e-9) const;

  friend bool operator==(const Grid1D& a, const Grid1D& b) noexcept {
    return a.data_ == b.data_ || (a.size() == b.size() && a.length() == b.length());
  }

 private:
  struct Data {
    std::size_t n;
    double length;
    std::vector<double> points;
    std::vector<double> wavenumbers;
  };
  std::shared_ptr<const Data> data_;
};

/// Convenience spelling of the Grid1D constructor.
inline Grid1D make_grid(std::size_t n, double length) { return Grid1D(n, length); }

}  // namespace kglab
