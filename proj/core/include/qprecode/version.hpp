#pragma once

namespace qprecode {

inline constexpr const char* version = "0.1.0";

}  // namespace qprecode
