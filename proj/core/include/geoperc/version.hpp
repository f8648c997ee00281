#pragma once

namespace geoperc {

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace geoperc
