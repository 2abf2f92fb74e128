#pragma once

namespace xs {
inline constexpr const char* kVersion = "0.1.0";
}
