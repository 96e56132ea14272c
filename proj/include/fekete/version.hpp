#pragma once

namespace fekete {
inline constexpr const char* kVersion = "1.0.0";
}
