#pragma once

namespace shadowbench {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace shadowbench
