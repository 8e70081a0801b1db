#pragma once

namespace htm {

inline constexpr const char* kLibraryName = "htm-trixel-index";
inline constexpr const char* kLibraryVersion = "1.0.0";

}  // namespace htm
