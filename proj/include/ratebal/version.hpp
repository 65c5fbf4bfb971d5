#pragma once

namespace ratebal {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ratebal
