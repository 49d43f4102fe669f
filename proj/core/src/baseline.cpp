#include "lens/baseline.hpp"

#include <cmath>

#include "lens/error.hpp"

namespace lens {

double sad_distance(const NormalizedFrame& a, const NormalizedFrame& b) {
  if (!a.intensities.same_shape(b.intensities)) {
    throw ValidationError("SAD needs frames of identical shape");
  }
  const auto va = a.intensities.values();
  const auto vb = b.intensities.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < va.size(); ++k) {
    sum += std::abs(va[k] - vb[k]);
  }
  return sum;
}

SimilarityMatrix sad_matrix(const FrameDatabase& refs, const FrameDatabase& queries) {
  if (!(refs.selector == queries.selector)) {
    throw ValidationError("reference and query databases use different pixel selectors");
  }
  Grid<double> scores(queries.frames.size(), refs.frames.size());
  for (std::size_t q = 0; q < queries.frames.size(); ++q) {
    for (std::size_t r = 0; r < refs.frames.size(); ++r) {
      scores(q, r) = -sad_distance(queries.frames[q], refs.frames[r]);
    }
  }
  return SimilarityMatrix(std::move(scores));
}

}  // namespace lens
