#pragma once

namespace kmod {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kmod
