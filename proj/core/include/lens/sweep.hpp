#pragma once

// Model-size / sequence-length sweep: trains and localizes once per
// (pixels, feature multiplier) cell, then scores every sequence length.
//
// Grid file: flat `key = value` lines. `pixels`, `feature_multiplier` and
// `seq_len` take comma-separated lists; `places`, `noise`, `synth_seed`
// describe the synthetic traverse; `reference`/`query` (and optionally
// `ground_truth`) switch to recorded event files with random pixel
// selection; `jobs` runs cells concurrently. Any other key is a Config key.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "lens/config.hpp"

namespace lens {

struct SweepGrid {
  Config base;
  std::vector<std::size_t> pixels{25, 49, 100};
  std::vector<std::size_t> feature_multipliers{1, 2};
  std::vector<std::size_t> seq_lens{1, 4, 10};
  std::size_t places = 50;
  double noise = 0.1;
  std::uint64_t synth_seed = 0;
  std::optional<std::filesystem::path> reference;
  std::optional<std::filesystem::path> query;
  std::optional<std::filesystem::path> ground_truth;
  std::size_t jobs = 1;
};

SweepGrid parse_sweep_grid(std::string_view text);
SweepGrid load_sweep_grid(const std::filesystem::path& path);

struct SweepRow {
  std::size_t pixels = 0;
  std::size_t feature_multiplier = 0;
  std::size_t features = 0;
  std::size_t seq_len = 0;
  std::size_t parameters = 0;
  double lens_recall_at_1 = 0.0;
  double sad_recall_at_1 = 0.0;
  double lens_recall_auc = 0.0;
  double sad_recall_auc = 0.0;
};

std::vector<SweepRow> run_sweep(const SweepGrid& grid);

/// Runs the sweep and writes <out>/sweep.csv.
std::vector<SweepRow> cmd_sweep(const std::filesystem::path& grid_file,
                                const std::filesystem::path& out_dir);

}  // namespace lens
