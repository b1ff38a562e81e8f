#pragma once

namespace hdl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hdl
