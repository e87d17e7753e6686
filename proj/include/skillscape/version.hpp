#pragma once

namespace skillscape {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace skillscape
