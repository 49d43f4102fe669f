#pragma once

// Recall@N, precision-recall curves and their areas, with a per-place
// ground-truth tolerance.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "lens/matching.hpp"

namespace lens {

struct GroundTruth {
  /// query index -> true reference index
  std::map<std::size_t, std::size_t> truth;
  std::size_t tolerance = 0;

  /// q -> q for every query.
  static GroundTruth diagonal(std::size_t queries, std::size_t tolerance);

  bool matches(std::size_t query, std::size_t reference) const;
  std::size_t reference_for(std::size_t query) const;
  /// Every query of `m` has an entry and every reference is in range.
  void check(const SimilarityMatrix& m) const;
};

/// `query_index,reference_index` lines; blank lines and `#` lines are skipped.
GroundTruth read_ground_truth(std::istream& in, std::size_t tolerance);
GroundTruth load_ground_truth(const std::filesystem::path& path, std::size_t tolerance);
void write_ground_truth(std::ostream& out, const GroundTruth& gt);

std::vector<double> recall_at_n(const SimilarityMatrix& m, const GroundTruth& gt,
                                std::span<const std::size_t> ns);

struct CurvePoint {
  double x = 0.0;  // recall
  double y = 0.0;  // precision

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// points[0] is the (recall 0, precision 1) anchor; points[k + 1] was measured
/// at thresholds[k]. Thresholds descend.
struct PRCurve {
  std::vector<CurvePoint> points;
  std::vector<double> thresholds;
};

/// A query counts as a prediction when its best score is >= the threshold.
/// Thresholds are evenly spaced from the highest to the lowest best score.
PRCurve pr_curve(const SimilarityMatrix& m, const GroundTruth& gt,
                 std::size_t num_thresholds = 100);

/// Trapezoidal area over x; x must be non-decreasing.
double auc(std::span<const CurvePoint> points);

/// Area under Recall@N with N rescaled onto [0, 1].
double recall_auc(std::span<const std::size_t> ns, std::span<const double> recalls);

/// 1 .. min(cap, references).
std::vector<std::size_t> default_recall_ns(std::size_t references, std::size_t cap = 25);

void write_recall_csv(std::ostream& out, std::span<const std::size_t> ns,
                      std::span<const double> recalls);
void write_pr_csv(std::ostream& out, const PRCurve& curve);

}  // namespace lens
