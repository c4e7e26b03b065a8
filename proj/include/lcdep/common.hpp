#pragma once

#include <limits>

namespace lcdep {

inline constexpr int kUnbounded = std::numeric_limits<int>::max();

}  // namespace lcdep
