#pragma once

namespace bianchi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bianchi
