#pragma once

#include <string_view>

namespace playa {

inline constexpr std::string_view kToolName = "playa";
inline constexpr std::string_view kToolVersion = "0.1.0";

} // namespace playa
