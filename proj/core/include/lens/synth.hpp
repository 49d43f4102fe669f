#pragma once

// Synthetic traverses: a desk-scale stand-in for recorded robot data.
//
// Each place gets a random side x side intensity map. The map is laid out on
// the centre pixels of 8x8 blocks inside a top-centre ROI, where crop and
// centre selection recover exactly side x side inputs. Per
// pixel event counts are Poisson with mean max_rate * intensity over one
// window. The query pass reuses the reference events except on a noise
// fraction of pixels per place, which get a fresh intensity and fresh events.

#include <cstddef>
#include <cstdint>

#include "lens/events.hpp"
#include "lens/framegen.hpp"

namespace lens {

struct SynthOptions {
  std::size_t places = 50;
  std::size_t pixels = 100;
  double noise = 0.0;
  std::uint64_t seed = 0;
  Timestamp window_us = 1'000'000;
  double max_rate = 20.0;
  /// Events per window scattered outside the ROI.
  std::size_t background_events = 4;

  void validate() const;
};

struct SynthLayout {
  SensorGeometry sensor;
  RegionOfInterest roi;
  CenterSelection selection;
  std::size_t side = 0;
};

SynthLayout synth_layout(std::size_t pixels);

struct SynthTraverse {
  SynthLayout layout;
  EventStream reference;
  EventStream query;
};

SynthTraverse synthesize(const SynthOptions& options);

}  // namespace lens
