#include <gtest/gtest.h>

#include "lens/error.hpp"
#include "lens/model_io.hpp"
#include "lens/text.hpp"
#include "test_util.hpp"

namespace lens {
namespace {

TEST(ModelIo, RoundTripPreservesEffectiveWeights) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto m = init_network(16, 12, 5, HyperParams{}, seed);
    m.trained = seed % 2 == 0;
    const auto back = deserialize_model(serialize_model(m));
    EXPECT_EQ(back.n_in, m.n_in);
    EXPECT_EQ(back.n_feat, m.n_feat);
    EXPECT_EQ(back.n_out, m.n_out);
    EXPECT_EQ(back.seed, m.seed);
    EXPECT_EQ(back.trained, m.trained);
    EXPECT_EQ(back.hyper, m.hyper);
    EXPECT_EQ(back.input_feature.effective(), m.input_feature.effective());
    EXPECT_EQ(back.feature_output.effective(), m.feature_output.effective());
    EXPECT_EQ(back.input_feature.target_rate, m.input_feature.target_rate);
    EXPECT_EQ(back.feature_output.target_rate, m.feature_output.target_rate);
    EXPECT_EQ(back.parameter_count(), m.parameter_count());
    EXPECT_EQ(serialize_model(back), serialize_model(m));
  }
}

TEST(ModelIo, ReloadedModelInfersIdentically) {
  HyperParams h;
  h.theta_max_if = 1.0;
  auto m = init_network(9, 10, 4, h, 5);
  for (auto& w : m.input_feature.excitatory) w *= 5.0f;
  for (auto& w : m.feature_output.excitatory) w *= 5.0f;
  const auto back = deserialize_model(serialize_model(m));
  const auto raster = rate_encode(std::vector<double>(9, 0.7), 300, 2);
  EXPECT_EQ(infer(back, raster, IafParams{}), infer(m, raster, IafParams{}));
}

TEST(ModelIo, StartsWithMagicAndHeader) {
  const auto bytes = serialize_model(init_network(2, 3, 4, HyperParams{}, 8));
  EXPECT_EQ(bytes.substr(0, 9), "LENSMDL1\n");
  EXPECT_NE(bytes.find("\nn_in=2\n"), std::string::npos);
  EXPECT_NE(bytes.find("\nseed=8\n"), std::string::npos);
  EXPECT_NE(bytes.find("---\nw_if 3 2\n"), std::string::npos);
}

TEST(ModelIo, TargetArchitectureFitsSizeBudget) {
  const auto m = init_network(49, 63, 641, HyperParams{}, 0);
  const auto bytes = serialize_model(m);
  EXPECT_LE(bytes.size(), 180'000u);
  EXPECT_NEAR(static_cast<double>(m.parameter_count()), 44'000.0, 4'400.0);
}

TEST(ModelIo, RejectsBadMagic) {
  auto bytes = serialize_model(init_network(2, 2, 2, HyperParams{}, 0));
  bytes[0] = 'X';
  EXPECT_THROW(deserialize_model(bytes), ValidationError);
}

TEST(ModelIo, RejectsTruncation) {
  const auto bytes = serialize_model(init_network(4, 4, 4, HyperParams{}, 0));
  for (std::size_t cut : {bytes.size() - 1, bytes.size() - 10, bytes.size() / 2, std::size_t{20}}) {
    EXPECT_THROW(deserialize_model(bytes.substr(0, cut)), ValidationError) << "cut " << cut;
  }
}

TEST(ModelIo, RejectsShapeMismatch) {
  auto bytes = serialize_model(init_network(4, 4, 4, HyperParams{}, 0));
  const auto pos = bytes.find("n_in=4");
  bytes.replace(pos, 6, "n_in=5");
  EXPECT_THROW(deserialize_model(bytes), ValidationError);
}

TEST(ModelIo, SaveLoad) {
  test::TempDir dir;
  const auto m = init_network(6, 5, 3, HyperParams{}, 1);
  save_model(dir / "m.lens", m);
  EXPECT_EQ(serialize_model(load_model(dir / "m.lens")), serialize_model(m));
  EXPECT_THROW(load_model(dir / "missing.lens"), IoError);
  text::write_file(dir / "junk.lens", "hello\n");
  try {
    load_model(dir / "junk.lens");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("junk.lens"), std::string::npos);
  }
}

}  // namespace
}  // namespace lens
