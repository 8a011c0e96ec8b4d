#pragma once

namespace fuzzdyn {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kSchema = "fuzzdyn/1";

}  // namespace fuzzdyn
