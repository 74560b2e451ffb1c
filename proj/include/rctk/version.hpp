#pragma once

namespace rctk {

inline constexpr const char* kVersion = "0.1.0";

} // namespace rctk
