#include "greenpod/version.hpp"

namespace greenpod {

std::string_view version() { return GREENPOD_VERSION; }

}  // namespace greenpod
