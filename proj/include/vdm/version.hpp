#pragma once

namespace vdm {

inline constexpr const char* kToolName = "vdm";
inline constexpr const char* kVersion = "0.1.0";

} // namespace vdm
