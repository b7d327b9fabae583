#pragma once

namespace intentnet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace intentnet
