#include "lens/framegen.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "lens/error.hpp"
#include "lens/rng.hpp"
#include "lens/text.hpp"

namespace lens {

namespace {

std::size_t exact_sqrt(std::size_t n) {
  auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (side * side != n) {
    throw ValidationError("pixel count " + std::to_string(n) + " is not a perfect square");
  }
  return side;
}

}  // namespace

RandomSelection make_random_selection(std::size_t rows, std::size_t cols, std::size_t n,
                                      std::uint64_t seed) {
  if (n == 0 || n > rows * cols) {
    throw ValidationError("cannot select " + std::to_string(n) + " pixels from a " +
                          std::to_string(rows) + "x" + std::to_string(cols) + " frame");
  }
  const std::size_t side = exact_sqrt(n);
  std::vector<std::size_t> order(rows * cols);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  RandomSelection sel;
  sel.seed = seed;
  sel.side = side;
  sel.indices.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    sel.indices.push_back({order[k] / cols, order[k] % cols});
  }
  return sel;
}

std::vector<EventFrame> bin_events(const EventStream& stream, Timestamp duration) {
  if (duration == 0) {
    throw ValidationError("bin duration must be positive");
  }
  if (stream.empty()) {
    return {};
  }
  const Timestamp origin = stream.events().front().t / duration * duration;
  const Timestamp last = stream.events().back().t;
  const std::size_t count = static_cast<std::size_t>((last - origin) / duration + 1);
  return bin_events(stream, duration, origin, count);
}

std::vector<EventFrame> bin_events(const EventStream& stream, Timestamp duration,
                                   Timestamp origin, std::size_t count) {
  if (duration == 0) {
    throw ValidationError("bin duration must be positive");
  }
  const auto& g = stream.geometry();
  std::vector<EventFrame> frames(count);
  for (std::size_t k = 0; k < count; ++k) {
    frames[k].counts = Grid<std::uint32_t>(g.height, g.width, 0);
    frames[k].place_index = k;
    frames[k].window = {origin + k * duration, duration};
  }
  for (const Event& e : stream.events()) {
    if (e.t < origin) {
      continue;
    }
    const Timestamp k = (e.t - origin) / duration;
    if (k >= count) {
      break;
    }
    ++frames[k].counts(e.y, e.x);
  }
  return frames;
}

EventFrame select_center(const EventFrame& frame, const CenterSelection& sel) {
  if (sel.kernel == 0 || sel.stride == 0) {
    throw ValidationError("kernel and stride must be positive");
  }
  if (sel.offset_y >= sel.kernel || sel.offset_x >= sel.kernel) {
    throw ValidationError("selection offset must lie within the kernel");
  }
  const std::size_t rows = frame.counts.rows();
  const std::size_t cols = frame.counts.cols();
  if (rows % sel.stride != 0 || cols % sel.stride != 0) {
    throw ValidationError("frame " + std::to_string(rows) + "x" + std::to_string(cols) +
                          " is not divisible by stride " + std::to_string(sel.stride));
  }
  const std::size_t out_rows = rows / sel.stride;
  const std::size_t out_cols = cols / sel.stride;
  if ((out_rows > 0 && (out_rows - 1) * sel.stride + sel.offset_y >= rows) ||
      (out_cols > 0 && (out_cols - 1) * sel.stride + sel.offset_x >= cols)) {
    throw ValidationError("selection offset reaches past the frame edge");
  }
  EventFrame out{Grid<std::uint32_t>(out_rows, out_cols), frame.place_index, frame.window};
  for (std::size_t r = 0; r < out_rows; ++r) {
    for (std::size_t c = 0; c < out_cols; ++c) {
      out.counts(r, c) = frame.counts(r * sel.stride + sel.offset_y, c * sel.stride + sel.offset_x);
    }
  }
  return out;
}

EventFrame apply_selection(const EventFrame& frame, const RandomSelection& sel) {
  if (sel.side * sel.side != sel.indices.size()) {
    throw ValidationError("random selection is not square");
  }
  EventFrame out{Grid<std::uint32_t>(sel.side, sel.side), frame.place_index, frame.window};
  auto dst = out.counts.values();
  for (std::size_t k = 0; k < sel.indices.size(); ++k) {
    const PixelIndex& p = sel.indices[k];
    if (p.y >= frame.counts.rows() || p.x >= frame.counts.cols()) {
      throw ValidationError("random selection index outside frame");
    }
    dst[k] = frame.counts(p.y, p.x);
  }
  return out;
}

EventFrame select_random(const EventFrame& frame, std::size_t n, std::uint64_t seed) {
  return apply_selection(frame,
                         make_random_selection(frame.counts.rows(), frame.counts.cols(), n, seed));
}

EventFrame apply_selector(const EventFrame& frame, const PixelSelector& selector) {
  return std::visit(
      [&](const auto& sel) -> EventFrame {
        using T = std::decay_t<decltype(sel)>;
        if constexpr (std::is_same_v<T, CenterSelection>) {
          return select_center(frame, sel);
        } else {
          return apply_selection(frame, sel);
        }
      },
      selector);
}

NormalizedFrame normalize(const EventFrame& frame) {
  NormalizedFrame out{Grid<double>(frame.counts.rows(), frame.counts.cols(), 0.0)};
  const auto values = frame.counts.values();
  const std::uint32_t peak = values.empty() ? 0 : *std::max_element(values.begin(), values.end());
  if (peak == 0) {
    return out;
  }
  auto dst = out.intensities.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    dst[i] = static_cast<double>(values[i]) / static_cast<double>(peak);
  }
  return out;
}

void write_frame(std::ostream& out, const EventFrame& frame) {
  out << "# " << frame.counts.rows() << ',' << frame.counts.cols() << ',';
  if (frame.place_index) {
    out << *frame.place_index;
  } else {
    out << -1;
  }
  out << '\n';
  for (std::size_t r = 0; r < frame.counts.rows(); ++r) {
    for (std::size_t c = 0; c < frame.counts.cols(); ++c) {
      if (c) out << ',';
      out << frame.counts(r, c);
    }
    out << '\n';
  }
}

EventFrame read_frame(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw ParseError(1, "expected frame header '# <height>,<width>,<place_index>'");
  }
  auto head = text::split(std::string_view(line).substr(2), ',');
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::int64_t place = 0;
  if (head.size() != 3 || !text::parse_uint(head[0], rows) || !text::parse_uint(head[1], cols) ||
      !text::parse_int(head[2], place) || place < -1) {
    throw ParseError(1, "malformed frame header");
  }
  EventFrame frame;
  frame.counts = Grid<std::uint32_t>(rows, cols);
  if (place >= 0) {
    frame.place_index = static_cast<std::size_t>(place);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) {
      throw ParseError(r + 2, "missing frame row");
    }
    auto cells = text::split(line, ',');
    if (cells.size() != cols) {
      throw ParseError(r + 2, "expected " + std::to_string(cols) + " values");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      std::uint64_t v = 0;
      if (!text::parse_uint(cells[c], v) || v > UINT32_MAX) {
        throw ParseError(r + 2, "malformed count");
      }
      frame.counts(r, c) = static_cast<std::uint32_t>(v);
    }
  }
  return frame;
}

}  // namespace lens
