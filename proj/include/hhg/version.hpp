#pragma once

namespace hhg {
inline constexpr const char* version = "0.1.0";
}
