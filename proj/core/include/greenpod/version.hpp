#pragma once

#include <string_view>

namespace greenpod {

std::string_view version();

}  // namespace greenpod
