#pragma once

namespace radeval {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace radeval
