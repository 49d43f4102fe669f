#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lens/events.hpp"
#include "lens/grid.hpp"
#include "lens/rng.hpp"

namespace lens::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "lens_test";
    if (info) {
      name += std::string("_") + info->test_suite_name() + "_" + info->name();
    }
    for (char& c : name) {
      if (c == '/') c = '_';
    }
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline EventStream random_stream(std::uint64_t seed, std::size_t n, SensorGeometry g,
                                 Timestamp span) {
  Rng rng(seed);
  std::vector<Event> events;
  events.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    Event e;
    e.t = rng.below(span);
    e.x = static_cast<std::uint32_t>(rng.below(g.width));
    e.y = static_cast<std::uint32_t>(rng.below(g.height));
    e.polarity = rng.bernoulli(0.5) ? Polarity::On : Polarity::Off;
    events.push_back(e);
  }
  return EventStream(g, std::move(events));
}

inline Grid<double> random_grid(std::uint64_t seed, std::size_t rows, std::size_t cols,
                                double lo = 0.0, double hi = 1.0) {
  Rng rng(seed);
  Grid<double> g(rows, cols);
  for (double& v : g) v = rng.uniform(lo, hi);
  return g;
}

}  // namespace lens::test
