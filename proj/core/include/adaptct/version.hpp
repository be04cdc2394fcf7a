#pragma once

namespace adaptct {

inline constexpr const char* kVersion = "0.1.0";

} // namespace adaptct
