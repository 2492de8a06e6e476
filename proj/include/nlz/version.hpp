#pragma once

namespace nlz {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace nlz
