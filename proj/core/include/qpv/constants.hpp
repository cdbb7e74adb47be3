#pragma once

namespace qpv {

// Speed of light in vacuum, m/s. Exact by definition of the metre.
inline constexpr double kSpeedOfLight = 299'792'458.0;

// Tolerance for exact-algebra checks (rotation composition, normalization
// drift, closed-form comparisons).
inline constexpr double kExactTol = 1e-12;

// Monte-Carlo assertions allow this many binomial standard deviations.
inline constexpr double kMonteCarloSigmas = 3.0;

// A density matrix whose trace strays from 1 by more than this signals a
// caller bug rather than accumulated rounding.
inline constexpr double kDensityTraceTol = 1e-9;

// Default round-trip timing tolerance in seconds (~0.3 m of position slack).
inline constexpr double kDefaultTimingToleranceS = 1e-9;

// Maximum spread of verifier distances accepted in equidistant mode, metres.
inline constexpr double kEquidistantTolM = 1e-6;

}  // namespace qpv
