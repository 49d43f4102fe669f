#pragma once

// Event frames: binning streams into per-pixel counts, pixel selection and
// normalization into network inputs.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "lens/events.hpp"
#include "lens/grid.hpp"

namespace lens {

struct TimeWindow {
  Timestamp start = 0;
  Timestamp duration = 0;

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// Per-pixel event counts (rows = y, cols = x) over one time window.
struct EventFrame {
  Grid<std::uint32_t> counts;
  std::optional<std::size_t> place_index;
  TimeWindow window;

  friend bool operator==(const EventFrame&, const EventFrame&) = default;
};

/// Intensities in [0, 1], same shape as the source frame.
struct NormalizedFrame {
  Grid<double> intensities;

  std::size_t pixel_count() const noexcept { return intensities.size(); }
  friend bool operator==(const NormalizedFrame&, const NormalizedFrame&) = default;
};

/// Picks one pixel per block: output(r, c) = input(r*stride + dy, c*stride + dx).
struct CenterSelection {
  std::size_t kernel = 8;
  std::size_t stride = 8;
  std::size_t offset_y = 4;
  std::size_t offset_x = 4;

  friend bool operator==(const CenterSelection&, const CenterSelection&) = default;
};

struct PixelIndex {
  std::size_t y = 0;
  std::size_t x = 0;

  friend bool operator==(const PixelIndex&, const PixelIndex&) = default;
};

/// A fixed random subset of pixels, reshaped row-major to side x side.
struct RandomSelection {
  std::vector<PixelIndex> indices;
  std::uint64_t seed = 0;
  std::size_t side = 0;

  friend bool operator==(const RandomSelection&, const RandomSelection&) = default;
};

using PixelSelector = std::variant<CenterSelection, RandomSelection>;

/// Draws `n` distinct pixels of a rows x cols frame from a seeded shuffle.
/// `n` must be a perfect square no larger than rows * cols.
RandomSelection make_random_selection(std::size_t rows, std::size_t cols, std::size_t n,
                                      std::uint64_t seed);

/// Consecutive non-overlapping windows starting at the window containing the
/// first event (origin aligned down to a multiple of `duration`).
std::vector<EventFrame> bin_events(const EventStream& stream, Timestamp duration);

/// Exactly `count` windows starting at `origin`; events outside are ignored.
std::vector<EventFrame> bin_events(const EventStream& stream, Timestamp duration,
                                   Timestamp origin, std::size_t count);

EventFrame select_center(const EventFrame& frame, const CenterSelection& sel = {});
EventFrame select_random(const EventFrame& frame, std::size_t n, std::uint64_t seed);
EventFrame apply_selection(const EventFrame& frame, const RandomSelection& sel);
EventFrame apply_selector(const EventFrame& frame, const PixelSelector& selector);

/// Divides by the frame maximum; an all-zero frame maps to all zeros.
NormalizedFrame normalize(const EventFrame& frame);

/// Debug dump: `# <height>,<width>,<place_index>` then one comma-separated row
/// per line. A frame without a place index is written with index -1.
void write_frame(std::ostream& out, const EventFrame& frame);
EventFrame read_frame(std::istream& in);

}  // namespace lens
