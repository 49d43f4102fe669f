#pragma once

// End-to-end operations behind the `lens` command-line tool. Each cmd_*
// function reads its inputs from files, writes its outputs into files and
// returns a summary for printing.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lens/baseline.hpp"
#include "lens/config.hpp"
#include "lens/eval.hpp"
#include "lens/events.hpp"
#include "lens/framegen.hpp"
#include "lens/matching.hpp"
#include "lens/snn.hpp"
#include "lens/synth.hpp"
#include "lens/training.hpp"

namespace lens {

enum class DatasetSource { Parsed, Synthetic };

/// Ordered places of one traverse, ready for the network and the baseline.
struct TraverseDataset {
  std::string name;
  std::vector<EventFrame> frames;      // after crop + selection
  std::vector<NormalizedFrame> inputs;
  std::vector<std::size_t> labels;     // 0 .. places-1
  std::optional<GroundTruth> ground_truth;
  DatasetSource source = DatasetSource::Parsed;
  PixelSelector selector;

  std::size_t places() const noexcept { return frames.size(); }
  std::size_t pixels() const noexcept { return inputs.empty() ? 0 : inputs.front().pixel_count(); }
};

PixelSelector make_selector(const Config& cfg, std::size_t rows, std::size_t cols);

/// Crop, bin, select and normalize a stream. Windows are laid out on the
/// uncropped stream.
TraverseDataset build_dataset(const EventStream& stream, const Config& cfg, std::string name,
                              DatasetSource source = DatasetSource::Parsed);

struct TrainResult {
  NetworkModel model;
  TrainingLog log;
};

TrainResult train_model(const TraverseDataset& reference, const Config& cfg);

/// Output-layer spike counts for every window of a traverse.
std::vector<std::vector<std::uint32_t>> spike_counts(const NetworkModel& model,
                                                     const TraverseDataset& traverse,
                                                     const Config& cfg);

struct LocalizeResult {
  SimilarityMatrix raw;
  SimilarityMatrix sequence;
  std::vector<MatchResult> matches;
};

LocalizeResult localize(const NetworkModel& model, const TraverseDataset& query, const Config& cfg);
LocalizeResult match_baseline(const TraverseDataset& reference, const TraverseDataset& query,
                              const Config& cfg);

struct MetricReport {
  std::string name;
  std::vector<std::size_t> ns;
  std::vector<double> recall;
  PRCurve pr;
  double pr_auc = 0.0;
  double recall_auc = 0.0;

  double recall_at_1() const { return recall.empty() ? 0.0 : recall.front(); }
};

MetricReport evaluate_matrix(const SimilarityMatrix& m, const GroundTruth& gt,
                             std::size_t pr_thresholds, std::string name);

// ---- commands --------------------------------------------------------------

struct TrainSummary {
  std::size_t n_in = 0;
  std::size_t n_feat = 0;
  std::size_t n_out = 0;
  std::size_t parameters = 0;
  std::uintmax_t model_bytes = 0;
  std::filesystem::path model_path;
  std::filesystem::path log_path;
};

/// Writes the model and `<model>.log` (the per-epoch training log).
TrainSummary cmd_train(const Config& cfg, const std::filesystem::path& events,
                       const std::filesystem::path& model_out);

/// Writes lens_raw.csv, lens.csv (sequence matched) and lens_matches.csv.
LocalizeResult cmd_localize(const Config& cfg, const std::filesystem::path& model,
                            const std::filesystem::path& query_events,
                            const std::filesystem::path& out_dir);

/// Writes sad_raw.csv, sad.csv, sad_matches.csv and sad_database.txt (the
/// selected reference frames in frame-dump format).
LocalizeResult cmd_baseline(const Config& cfg, const std::filesystem::path& reference_events,
                            const std::filesystem::path& query_events,
                            const std::filesystem::path& out_dir);

/// Writes <out>/<matrix>/recall_at_n.csv, <out>/<matrix>/pr_curve.csv and
/// <out>/summary.csv; with `plot`, also pr_curves.svg and recall_at_n.svg.
std::vector<MetricReport> cmd_evaluate(const Config& cfg,
                                       const std::vector<std::filesystem::path>& matrices,
                                       const std::optional<std::filesystem::path>& ground_truth,
                                       const std::filesystem::path& out_dir, bool plot = false);

struct SynthPaths {
  std::filesystem::path reference;
  std::filesystem::path query;
  std::filesystem::path ground_truth;
  std::filesystem::path config;
};

/// Writes reference.events, query.events, ground_truth.csv and synth.cfg
/// (the ROI/selection settings matching the generated layout).
SynthPaths cmd_synth(const SynthOptions& options, const std::filesystem::path& out_dir);

/// Config lines that point the crop/selection stages at a synthetic layout.
std::string layout_config_text(const SynthLayout& layout);
void apply_layout(Config& cfg, const SynthLayout& layout);

}  // namespace lens
