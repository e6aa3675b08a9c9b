#pragma once

namespace frlogic {

/// Shared comparison tolerance for amplitudes, expectations and probability weights.
inline constexpr double kDefaultTolerance = 1e-9;

}  // namespace frlogic
