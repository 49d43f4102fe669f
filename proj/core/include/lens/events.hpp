#pragma once

// Event-camera streams: the text file format, ROI cropping and time windows.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lens {

/// Microseconds.
using Timestamp = std::uint64_t;

enum class Polarity : std::uint8_t { Off = 0, On = 1 };

struct Event {
  Timestamp t = 0;
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  Polarity polarity = Polarity::On;

  friend bool operator==(const Event&, const Event&) = default;
};

struct SensorGeometry {
  std::uint32_t width = 0;
  std::uint32_t height = 0;

  bool contains(std::uint32_t x, std::uint32_t y) const noexcept { return x < width && y < height; }
  friend bool operator==(const SensorGeometry&, const SensorGeometry&) = default;
};

struct RegionOfInterest {
  std::uint32_t x0 = 24;
  std::uint32_t y0 = 0;
  std::uint32_t width = 80;
  std::uint32_t height = 80;

  bool fits(const SensorGeometry& g) const noexcept {
    return width > 0 && height > 0 && std::uint64_t{x0} + width <= g.width &&
           std::uint64_t{y0} + height <= g.height;
  }
  bool contains(std::uint32_t x, std::uint32_t y) const noexcept {
    return x >= x0 && x - x0 < width && y >= y0 && y - y0 < height;
  }
  friend bool operator==(const RegionOfInterest&, const RegionOfInterest&) = default;
};

/// Immutable, time-ordered sequence of events on a sensor.
///
/// Construction validates coordinates and stable-sorts by timestamp, so events
/// sharing a timestamp keep their input order.
class EventStream {
 public:
  EventStream() = default;
  EventStream(SensorGeometry geometry, std::vector<Event> events);

  const SensorGeometry& geometry() const noexcept { return geometry_; }
  std::span<const Event> events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  friend bool operator==(const EventStream&, const EventStream&) = default;

 private:
  SensorGeometry geometry_;
  std::vector<Event> events_;
};

EventStream parse_event_stream(std::istream& in);
EventStream parse_event_text(std::string_view text);
EventStream load_event_file(const std::filesystem::path& path);

void write_event_stream(std::ostream& out, const EventStream& stream);
std::string format_event_stream(const EventStream& stream);
void save_event_file(const std::filesystem::path& path, const EventStream& stream);

/// Keeps events inside `roi` and re-bases them to its origin.
EventStream crop_roi(const EventStream& stream, const RegionOfInterest& roi);

/// Events with t_start <= t < t_start + duration.
EventStream window(const EventStream& stream, Timestamp t_start, Timestamp duration);

}  // namespace lens
