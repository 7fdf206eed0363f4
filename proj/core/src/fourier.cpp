#include "kglab/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "kglab/error.hpp"

namespace kglab {

namespace {

// FFTW planning is not thread-safe; execution through the new-array interface is.
// Plans are made once per (size, direction) and kept for the process lifetime.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* scratch = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw Error("FFTW failed to create a plan of size " + std::to_string(n));
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

void execute_in_place(ComplexArray& data, int sign) {
  fftw_plan plan = PlanCache::instance().get(data.size(), sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

void check_length(const Grid1D& grid, std::size_t size, const char* what) {
  if (size != grid.size()) {
    throw LengthMismatch(std::string(what) + " has " + std::to_string(size) +
                         " entries but the grid has " + std::to_string(grid.size()));
  }
}

}  // namespace

ComplexArray forward_transform(const Grid1D& grid, std::span<const Complex> values) {
  check_length(grid, values.size(), "forward_transform input");
  ComplexArray out(values.begin(), values.end());
  execute_in_place(out, FFTW_FORWARD);
  // exp(-i k_s x_0) = exp(i pi j) = (-1)^s because x_0 = -L/2 and n is even.
  const double scale = 1.0 / static_cast<double>(out.size());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] *= (s % 2 == 0) ? scale : -scale;
  return out;
}

ComplexArray inverse_transform(const Grid1D& grid, std::span<const Complex> coefficients) {
  check_length(grid, coefficients.size(), "inverse_transform input");
  ComplexArray out(coefficients.begin(), coefficients.end());
  for (std::size_t s = 1; s < out.size(); s += 2) out[s] = -out[s];
  execute_in_place(out, FFTW_BACKWARD);
  return out;
}

double position_norm(const Grid1D& grid, std::span<const Complex> values) {
  check_length(grid, values.size(), "position_norm input");
  double sum = 0.0;
  for (const auto& v : values) sum += std::norm(v);
  return sum * grid.dx();
}

double spectral_norm(const Grid1D& grid, std::span<const Complex> coefficients) {
  check_length(grid, coefficients.size(), "spectral_norm input");
  double sum = 0.0;
  for (const auto& c : coefficients) sum += std::norm(c);
  return sum * grid.length();
}

RealArray spectral_derivative(const Grid1D& grid, std::span<const double> values) {
  check_length(grid, values.size(), "spectral_derivative input");
  ComplexArray buffer(values.begin(), values.end());
  auto coeffs = forward_transform(grid, buffer);
  const auto k = grid.wavenumbers();
  for (std::size_t s = 0; s < coeffs.size(); ++s) coeffs[s] *= Complex(0.0, k[s]);
  coeffs[grid.nyquist_slot()] = 0.0;
  auto deriv = inverse_transform(grid, coeffs);
  RealArray out(deriv.size());
  for (std::size_t i = 0; i < deriv.size(); ++i) out[i] = deriv[i].real();
  return out;
}

}  // namespace kglab
