#pragma once

namespace hmap {
inline constexpr const char* kVersion = "0.1.0";
}
