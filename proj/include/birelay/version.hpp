#pragma once

namespace birelay {

inline constexpr const char* kToolName = "birelay";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace birelay
