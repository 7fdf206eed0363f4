#pragma once

#include <string_view>

namespace kglab {

/// Library version, "major.minor.patch".
std::string_view version() noexcept;

}  // namespace kglab
