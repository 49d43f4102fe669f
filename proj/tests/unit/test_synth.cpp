#include <algorithm>

#include <gtest/gtest.h>

#include "lens/error.hpp"
#include "lens/framegen.hpp"
#include "lens/synth.hpp"
#include "test_util.hpp"

namespace lens {
namespace {

std::vector<EventFrame> selected_frames(const EventStream& s, const SynthLayout& layout,
                                        std::size_t places) {
  auto frames = bin_events(crop_roi(s, layout.roi), 1'000'000, 0, places);
  for (auto& f : frames) f = select_center(f, layout.selection);
  return frames;
}

TEST(SynthLayout, DefaultPixelsUseDefaultRoi) {
  const auto l = synth_layout(100);
  EXPECT_EQ(l.side, 10u);
  EXPECT_EQ(l.sensor, (SensorGeometry{128, 128}));
  EXPECT_EQ(l.roi, RegionOfInterest{});
  EXPECT_EQ(l.selection, CenterSelection{});
}

TEST(SynthLayout, OtherSizes) {
  const auto small = synth_layout(49);
  EXPECT_EQ(small.sensor, (SensorGeometry{128, 128}));
  EXPECT_EQ(small.roi, (RegionOfInterest{36, 0, 56, 56}));
  const auto large = synth_layout(400);
  EXPECT_EQ(large.sensor, (SensorGeometry{160, 160}));
  EXPECT_EQ(large.roi, (RegionOfInterest{0, 0, 160, 160}));
  EXPECT_THROW(synth_layout(50), ValidationError);
}

TEST(Synthesize, NoiselessQueryEqualsReference) {
  const auto t = synthesize({10, 100, 0.0, 3});
  EXPECT_EQ(t.query, t.reference);
  EXPECT_EQ(format_event_stream(t.query), format_event_stream(t.reference));
}

TEST(Synthesize, SeedDeterminesOutput) {
  const auto a = synthesize({8, 49, 0.2, 5});
  const auto b = synthesize({8, 49, 0.2, 5});
  const auto c = synthesize({8, 49, 0.2, 6});
  EXPECT_EQ(a.reference, b.reference);
  EXPECT_EQ(a.query, b.query);
  EXPECT_NE(a.reference, c.reference);
}

TEST(Synthesize, EventsStayInsidePlaceWindows) {
  const SynthOptions opt{12, 25, 0.3, 1};
  const auto t = synthesize(opt);
  for (const auto* s : {&t.reference, &t.query}) {
    EXPECT_EQ(s->geometry(), t.layout.sensor);
    EXPECT_LT(s->events().back().t, opt.places * opt.window_us);
  }
  const auto frames = selected_frames(t.reference, t.layout, opt.places);
  for (const auto& f : frames) {
    EXPECT_EQ(f.counts.rows(), 5u);
    EXPECT_GT(*std::max_element(f.counts.begin(), f.counts.end()), 0u);
  }
}

TEST(Synthesize, PipelineRecoversAllPixelEvents) {
  // Every ROI event lies on a block centre, so selection loses nothing.
  const auto t = synthesize({6, 100, 0.0, 2});
  const auto cropped = crop_roi(t.reference, t.layout.roi);
  std::size_t selected = 0;
  for (const auto& f : selected_frames(t.reference, t.layout, 6)) {
    for (auto v : f.counts) selected += v;
  }
  EXPECT_EQ(selected, cropped.size());
  EXPECT_LT(cropped.size(), t.reference.size());
}

TEST(Synthesize, NoiseTouchesAtMostItsShareOfPixels) {
  const SynthOptions opt{20, 100, 0.1, 4};
  const auto t = synthesize(opt);
  const auto ref = selected_frames(t.reference, t.layout, opt.places);
  const auto qry = selected_frames(t.query, t.layout, opt.places);
  std::size_t changed_total = 0;
  for (std::size_t p = 0; p < opt.places; ++p) {
    std::size_t changed = 0;
    for (std::size_t k = 0; k < 100; ++k) {
      changed += ref[p].counts.values()[k] != qry[p].counts.values()[k];
    }
    EXPECT_LE(changed, 10u);
    changed_total += changed;
  }
  EXPECT_GT(changed_total, 0u);
}

TEST(Synthesize, RejectsBadOptions) {
  EXPECT_THROW(synthesize({1, 100, 0.0, 0}), ValidationError);
  EXPECT_THROW(synthesize({5, 100, 1.5, 0}), ValidationError);
  EXPECT_THROW(synthesize({5, 99, 0.0, 0}), ValidationError);
}

}  // namespace
}  // namespace lens
