#include "lens/events.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "lens/error.hpp"
#include "lens/text.hpp"

namespace lens {

EventStream::EventStream(SensorGeometry geometry, std::vector<Event> events)
    : geometry_(geometry), events_(std::move(events)) {
  for (const Event& e : events_) {
    if (!geometry_.contains(e.x, e.y)) {
      throw ValidationError("event at (" + std::to_string(e.x) + "," + std::to_string(e.y) +
                            ") outside " + std::to_string(geometry_.width) + "x" +
                            std::to_string(geometry_.height) + " sensor");
    }
  }
  std::stable_sort(events_.begin(), events_.end(),
                   [](const Event& a, const Event& b) { return a.t < b.t; });
}

namespace {

SensorGeometry parse_header(std::string_view line) {
  if (line.size() < 2 || line[0] != '#' || line[1] != ' ') {
    throw ParseError(1, "expected header '# <width>,<height>'");
  }
  auto parts = text::split(line.substr(2), ',');
  std::uint64_t w = 0;
  std::uint64_t h = 0;
  if (parts.size() != 2 || !text::parse_uint(parts[0], w) || !text::parse_uint(parts[1], h) ||
      w == 0 || h == 0 || w > UINT32_MAX || h > UINT32_MAX) {
    throw ParseError(1, "malformed geometry header '" + std::string(line) + "'");
  }
  return {static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h)};
}

}  // namespace

EventStream parse_event_stream(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(1, "missing geometry header");
  }
  const SensorGeometry geometry = parse_header(line);

  std::vector<Event> events;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    auto fields = text::split(line, ',');
    std::int64_t t = 0;
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::int64_t p = 0;
    if (fields.size() != 4 || !text::parse_int(fields[0], t) || !text::parse_int(fields[1], x) ||
        !text::parse_int(fields[2], y) || !text::parse_int(fields[3], p)) {
      throw ParseError(line_no, "malformed event '" + line + "'");
    }
    if (t < 0) {
      throw ParseError(line_no, "negative timestamp");
    }
    if (p != 0 && p != 1) {
      throw ParseError(line_no, "polarity must be 0 or 1");
    }
    if (x < 0 || y < 0 || x >= geometry.width || y >= geometry.height) {
      throw ParseError(line_no, "coordinate (" + std::to_string(x) + "," + std::to_string(y) +
                                    ") outside declared geometry");
    }
    events.push_back({static_cast<Timestamp>(t), static_cast<std::uint32_t>(x),
                      static_cast<std::uint32_t>(y), p ? Polarity::On : Polarity::Off});
  }
  return EventStream(geometry, std::move(events));
}

EventStream parse_event_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_event_stream(in);
}

EventStream load_event_file(const std::filesystem::path& path) {
  const std::string contents = text::read_file(path);
  try {
    return parse_event_text(contents);
  } catch (const ParseError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_event_stream(std::ostream& out, const EventStream& stream) {
  out << "# " << stream.geometry().width << ',' << stream.geometry().height << '\n';
  for (const Event& e : stream.events()) {
    out << e.t << ',' << e.x << ',' << e.y << ',' << (e.polarity == Polarity::On ? 1 : 0) << '\n';
  }
}

std::string format_event_stream(const EventStream& stream) {
  std::ostringstream out;
  write_event_stream(out, stream);
  return std::move(out).str();
}

void save_event_file(const std::filesystem::path& path, const EventStream& stream) {
  text::write_file(path, format_event_stream(stream));
}

EventStream crop_roi(const EventStream& stream, const RegionOfInterest& roi) {
  if (!roi.fits(stream.geometry())) {
    throw ValidationError("region of interest exceeds sensor geometry");
  }
  std::vector<Event> kept;
  for (const Event& e : stream.events()) {
    if (roi.contains(e.x, e.y)) {
      kept.push_back({e.t, e.x - roi.x0, e.y - roi.y0, e.polarity});
    }
  }
  return EventStream({roi.width, roi.height}, std::move(kept));
}

EventStream window(const EventStream& stream, Timestamp t_start, Timestamp duration) {
  if (duration == 0) {
    throw ValidationError("window duration must be positive");
  }
  auto events = stream.events();
  auto first = std::partition_point(events.begin(), events.end(),
                                    [&](const Event& e) { return e.t < t_start; });
  auto last = std::partition_point(first, events.end(),
                                   [&](const Event& e) { return e.t - t_start < duration; });
  return EventStream(stream.geometry(), std::vector<Event>(first, last));
}

}  // namespace lens
