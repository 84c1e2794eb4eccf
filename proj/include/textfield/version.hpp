#pragma once

namespace textfield {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace textfield
