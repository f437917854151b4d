#ifndef FPRW_VERSION_HPP
#define FPRW_VERSION_HPP

#include <string_view>

namespace fprw {

inline constexpr std::string_view kToolName = "fprw";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Name of the pseudorandom generator, embedded in every export header.
// Determinism is promised within this implementation only.
inline constexpr std::string_view kGeneratorName = "splitmix64";

}  // namespace fprw

#endif
