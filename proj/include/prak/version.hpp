#pragma once

namespace prak {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace prak
