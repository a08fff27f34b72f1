#pragma once

namespace mdsift {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Exact SI speed of light, the default everywhere.
inline constexpr double kSpeedOfLight = 299'792'458.0;

// Rounded value radar datasheets use when quoting resolution figures.
// Pass it where byte-for-byte agreement with such figures matters.
inline constexpr double kRoundedSpeedOfLight = 3.0e8;

}  // namespace mdsift
