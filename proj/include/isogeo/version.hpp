#pragma once

namespace isogeo {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace isogeo
