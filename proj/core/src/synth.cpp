#include "lens/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "lens/error.hpp"
#include "lens/rng.hpp"

namespace lens {

namespace {

constexpr std::uint32_t kBlock = 8;
constexpr std::uint32_t kMinSensor = 128;

void emit_pixel(Rng& rng, std::uint32_t count, std::uint32_t x, std::uint32_t y, Timestamp start,
                Timestamp duration, std::vector<Event>& out) {
  for (std::uint32_t k = 0; k < count; ++k) {
    const Timestamp t = start + rng.below(duration);
    const auto p = rng.bernoulli(0.5) ? Polarity::On : Polarity::Off;
    out.push_back({t, x, y, p});
  }
}

}  // namespace

void SynthOptions::validate() const {
  if (places < 2) throw ValidationError("synth needs at least 2 places");
  if (pixels == 0) throw ValidationError("synth needs at least 1 pixel");
  if (!(noise >= 0.0 && noise <= 1.0)) throw ValidationError("synth noise must lie in [0, 1]");
  if (window_us == 0) throw ValidationError("synth window must be positive");
  if (!(max_rate > 0.0)) throw ValidationError("synth max_rate must be positive");
}

SynthLayout synth_layout(std::size_t pixels) {
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(pixels))));
  if (side == 0 || side * side != pixels) {
    throw ValidationError("synth pixel count " + std::to_string(pixels) +
                          " is not a perfect square");
  }
  SynthLayout layout;
  layout.side = side;
  const auto extent = static_cast<std::uint32_t>(side) * kBlock;
  layout.sensor = {std::max(kMinSensor, extent), std::max(kMinSensor, extent)};
  layout.roi = {(layout.sensor.width - extent) / 2, 0, extent, extent};
  layout.selection = {kBlock, kBlock, kBlock / 2, kBlock / 2};
  return layout;
}

SynthTraverse synthesize(const SynthOptions& opt) {
  opt.validate();
  SynthTraverse out;
  out.layout = synth_layout(opt.pixels);
  const auto& layout = out.layout;
  const std::size_t n = opt.pixels;
  const auto perturbed_count = static_cast<std::size_t>(std::llround(opt.noise * static_cast<double>(n)));

  const auto pixel_xy = [&](std::size_t k) {
    const auto r = static_cast<std::uint32_t>(k / layout.side);
    const auto c = static_cast<std::uint32_t>(k % layout.side);
    return std::pair{layout.roi.x0 + c * kBlock + kBlock / 2, layout.roi.y0 + r * kBlock + kBlock / 2};
  };

  std::vector<Event> ref_events;
  std::vector<Event> query_events;
  for (std::size_t place = 0; place < opt.places; ++place) {
    const Timestamp start = place * opt.window_us;
    Rng scene(derive_seed(opt.seed, 2 * place));
    Rng noise(derive_seed(opt.seed, 2 * place + 1));

    std::vector<double> intensity(n);
    for (auto& v : intensity) v = scene.uniform01();
    std::vector<std::uint32_t> counts(n);
    for (std::size_t k = 0; k < n; ++k) counts[k] = scene.poisson(opt.max_rate * intensity[k]);
    if (std::all_of(counts.begin(), counts.end(), [](auto c) { return c == 0; })) {
      counts[static_cast<std::size_t>(std::max_element(intensity.begin(), intensity.end()) -
                                      intensity.begin())] = 1;
    }

    // Per-pixel reference events, each pixel on its own stream.
    std::vector<std::vector<Event>> pixel_events(n);
    for (std::size_t k = 0; k < n; ++k) {
      Rng timing(derive_seed(derive_seed(opt.seed, 2 * place), k + 1));
      auto [x, y] = pixel_xy(k);
      emit_pixel(timing, counts[k], x, y, start, opt.window_us, pixel_events[k]);
    }
    std::vector<Event> background;
    if (!(layout.roi.width == layout.sensor.width && layout.roi.height == layout.sensor.height)) {
      while (background.size() < opt.background_events) {
        const auto x = static_cast<std::uint32_t>(scene.below(layout.sensor.width));
        const auto y = static_cast<std::uint32_t>(scene.below(layout.sensor.height));
        if (layout.roi.contains(x, y)) continue;
        emit_pixel(scene, 1, x, y, start, opt.window_us, background);
      }
    }

    std::vector<bool> perturbed(n, false);
    if (perturbed_count > 0) {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      noise.shuffle(order);
      for (std::size_t k = 0; k < perturbed_count; ++k) perturbed[order[k]] = true;
    }

    for (std::size_t k = 0; k < n; ++k) {
      ref_events.insert(ref_events.end(), pixel_events[k].begin(), pixel_events[k].end());
      if (!perturbed[k]) {
        query_events.insert(query_events.end(), pixel_events[k].begin(), pixel_events[k].end());
      } else {
        const double fresh = noise.uniform01();
        auto [x, y] = pixel_xy(k);
        emit_pixel(noise, noise.poisson(opt.max_rate * fresh), x, y, start, opt.window_us,
                   query_events);
      }
    }
    ref_events.insert(ref_events.end(), background.begin(), background.end());
    query_events.insert(query_events.end(), background.begin(), background.end());
  }
  out.reference = EventStream(layout.sensor, std::move(ref_events));
  out.query = EventStream(layout.sensor, std::move(query_events));
  return out;
}

}  // namespace lens
