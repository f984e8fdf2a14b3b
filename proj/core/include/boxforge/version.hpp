#pragma once

namespace boxforge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace boxforge
