#pragma once

// Similarity matrices (queries x references, larger = better), sequence
// smoothing along diagonals and per-query place matching.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lens/grid.hpp"

namespace lens {

class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  /// sequence_length 0 marks a raw matrix.
  explicit SimilarityMatrix(Grid<double> scores, std::size_t sequence_length = 0);

  std::size_t queries() const noexcept { return scores_.rows(); }
  std::size_t references() const noexcept { return scores_.cols(); }
  const Grid<double>& scores() const noexcept { return scores_; }
  double operator()(std::size_t q, std::size_t r) const { return scores_(q, r); }

  bool is_raw() const noexcept { return sequence_length_ == 0; }
  std::size_t sequence_length() const noexcept { return sequence_length_; }
  /// "raw" or "sequence(L)".
  std::string provenance() const;

  friend bool operator==(const SimilarityMatrix&, const SimilarityMatrix&) = default;

 private:
  Grid<double> scores_;
  std::size_t sequence_length_ = 0;
};

struct MatchResult {
  std::size_t query_index = 0;
  std::size_t predicted_reference = 0;
  double score = 0.0;
  /// References by descending score, ties by ascending index.
  std::vector<std::size_t> ranking;
};

/// Sliding mean over `bins` consecutive spike-count vectors. Output k covers
/// inputs k .. k + bins - 1; nothing is produced until `bins` inputs exist.
std::vector<std::vector<double>> accumulate_window(
    std::span<const std::vector<std::uint32_t>> counts, std::size_t bins = 4);

/// Online form of accumulate_window for a live spike-count feed.
class SpikeAccumulator {
 public:
  explicit SpikeAccumulator(std::size_t bins = 4);

  /// Returns the averaged vector once `bins` vectors have been pushed.
  std::optional<std::vector<double>> push(std::span<const std::uint32_t> counts);

 private:
  std::size_t bins_;
  std::vector<std::vector<std::uint32_t>> history_;
};

/// Centered diagonal mean over L terms; out-of-range terms are dropped and the
/// divisor shrinks to the number of terms kept.
SimilarityMatrix sequence_convolve(const SimilarityMatrix& m, std::size_t length);

/// Per-row argmax, ties to the lowest reference index.
std::vector<MatchResult> match_places(const SimilarityMatrix& m);

/// Stable descending ranking of one row.
std::vector<std::size_t> rank_references(std::span<const double> row);

/// `# Q,R,provenance` header then one comma-separated row per query.
void write_matrix(std::ostream& out, const SimilarityMatrix& m);
SimilarityMatrix read_matrix(std::istream& in);
void save_matrix(const std::filesystem::path& path, const SimilarityMatrix& m);
SimilarityMatrix load_matrix(const std::filesystem::path& path);

/// `query,predicted_reference,score` lines.
void write_matches(std::ostream& out, std::span<const MatchResult> matches);

}  // namespace lens
