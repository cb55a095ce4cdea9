#pragma once

namespace alame {
inline constexpr const char* kVersion = "0.1.0";
}
