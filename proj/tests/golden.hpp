#pragma once

// Regression anchors from seeded pilot runs. They pin today's output, they
// are not properties: any change to the RNG streams or the walk moves them.

#include <cstdint>

namespace qmlab::golden {

// twist-prob, hom:brooks:ab, eps 1/2, n = m = 60, 5000 trials.
struct TwistAnchor {
  std::uint64_t seed;
  std::uint64_t successes;
};
inline constexpr TwistAnchor kTwist[] = {{1, 2391}, {2, 2336}, {3, 2369}};
inline constexpr std::uint64_t kTwistTrials = 5000;

// subgroup-pipeline, hom:brooks:ab, seed 1, radius 3, 1000 trials, n = m.
struct PipelineAnchor {
  std::size_t n;
  std::uint64_t rank2;
  std::uint64_t joint;
};
inline constexpr PipelineAnchor kPipeline[] = {{20, 993, 458}, {60, 1000, 456}, {120, 1000, 457}};

}  // namespace qmlab::golden
