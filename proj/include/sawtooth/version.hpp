#pragma once

#include <string>

namespace sawtooth {

inline constexpr const char* kProjectName = "sawtooth";
inline constexpr const char* kVersion = "0.1.0";

/// Identifies the exact build that produced an output file. Reproducibility
/// of results is promised per build, so sidecars record this string.
inline std::string build_identifier() {
    return std::string(kProjectName) + " " + kVersion + " (" + __DATE__ + " " + __TIME__ +
#if defined(__clang__)
           ", clang " __clang_version__
#elif defined(__GNUC__)
           ", gcc " __VERSION__
#else
           ", unknown compiler"
#endif
           ")";
}

}  // namespace sawtooth
