#include "kglab/version.hpp"

namespace kglab {

std::string_view version() noexcept { return KGLAB_VERSION_STRING; }

}  // namespace kglab
