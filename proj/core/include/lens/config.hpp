#pragma once

// Flat key = value configuration. Every key has a default; unknown keys are
// rejected.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lens/events.hpp"
#include "lens/framegen.hpp"
#include "lens/snn.hpp"

namespace lens {

enum class SelectorMode { Center, Random };

struct Config {
  HyperParams hyper;
  IafParams iaf;
  double x_force = 0.5;
  bool shuffle = false;
  std::uint64_t shuffle_seed = 0;

  bool crop = true;
  RegionOfInterest roi;
  SelectorMode selector = SelectorMode::Center;
  CenterSelection center;
  std::size_t random_pixels = 49;
  std::uint64_t selector_seed = 0;

  Timestamp window_us = 1'000'000;
  std::size_t features = 200;
  std::size_t timesteps = 1000;
  double dt = 0.001;
  std::size_t accumulate_bins = 1;
  std::size_t seq_len = 4;
  std::size_t tolerance = 2;
  std::size_t pr_thresholds = 100;

  std::uint64_t seed = 0;
  std::uint64_t rate_seed = 1;

  /// Applies one `key = value` setting.
  void set(std::string_view key, std::string_view value);
  void validate() const;

  /// All keys in canonical order with their current values.
  std::vector<std::pair<std::string, std::string>> entries() const;
  std::string to_text() const;
};

/// Keys accepted by Config::set.
const std::vector<std::string>& config_keys();

/// Parses `key = value` lines; `#` starts a comment.
void apply_config_text(Config& cfg, std::string_view text);
Config load_config(const std::filesystem::path& path);

/// Applies `key=value` override strings (the CLI `--set` form).
void apply_overrides(Config& cfg, const std::vector<std::string>& overrides);

}  // namespace lens
