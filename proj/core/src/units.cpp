#include "kglab/units.hpp"

#include <cmath>
#include <string>

#include "kglab/error.hpp"

namespace kglab {

namespace {

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw InvalidArgument(std::string("unit constant ") + name +
                          " must be positive and finite, got " + std::to_string(v));
  }
}

}  // namespace

UnitSystem::UnitSystem(double hbar, double c, double m) : hbar_(hbar), c_(c), m_(m) {
  require_positive(hbar, "hbar");
  require_positive(c, "c");
  require_positive(m, "m");
  compton_omega_ = m * c * c / hbar;
  if (!std::isfinite(compton_omega_) || compton_omega_ <= 0.0) {
    throw InvalidArgument("rest frequency m c^2 / hbar is not a positive finite number");
  }
}

}  // namespace kglab
