#pragma once

namespace cfmgm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cfmgm
