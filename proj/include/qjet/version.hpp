#pragma once

namespace qjet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qjet
