#pragma once

namespace spinglass {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spinglass
