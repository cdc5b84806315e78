#pragma once

namespace discofield {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace discofield
