#pragma once

namespace sarfeas {

inline constexpr const char* kToolName = "sarfeas";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kRngName = "philox4x32-10";

}  // namespace sarfeas
