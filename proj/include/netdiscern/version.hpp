#pragma once

namespace netdiscern {

inline constexpr const char* kToolName = "netdiscern";
inline constexpr const char* kVersion = "0.1.0";

} // namespace netdiscern
