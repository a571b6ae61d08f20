#pragma once

namespace gkp {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kSqrtPi = 1.77245385090551602729816748334114518;
inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;

/// Branches with squared amplitude below this are pruned (weight accumulated).
inline constexpr double kBranchPruneEpsilon = 1e-12;

/// Comb teeth whose relative weight falls below this are dropped from sums.
inline constexpr double kToothTailWeight = 1e-15;

}  // namespace gkp
