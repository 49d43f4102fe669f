#pragma once

// Sum-of-absolute-differences matcher over the same normalized, downsampled
// frames the network sees.

#include <vector>

#include "lens/framegen.hpp"
#include "lens/matching.hpp"

namespace lens {

struct FrameDatabase {
  std::vector<NormalizedFrame> frames;
  PixelSelector selector;
};

double sad_distance(const NormalizedFrame& a, const NormalizedFrame& b);

/// scores(q, r) = -sad_distance(query q, reference r), so larger is better.
SimilarityMatrix sad_matrix(const FrameDatabase& refs, const FrameDatabase& queries);

}  // namespace lens
