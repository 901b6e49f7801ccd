#pragma once

namespace qfslice {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace qfslice
