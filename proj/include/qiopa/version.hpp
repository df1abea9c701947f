#pragma once

namespace qiopa {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace qiopa
