// Copyright 2026 The anoseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <limits>

#include "anoseg/mask_gen.hpp"
#include "test_util.hpp"

namespace anoseg {
namespace {

using testing::fill_rect;

std::size_t count(const BinaryMask& m) {
  std::size_t n = 0;
  for (const auto v : m.cells()) n += v;
  return n;
}

// A 60×40 image with a 600-px blob (30×20) and a 20-px blob (4×5) scored 1,
// everything else 0.
std::pair<LabelMap, ScoreMap> two_blobs() {
  const std::size_t w = 60;
  const std::size_t h = 40;
  std::vector<float> scores(w * h, 0.0f);
  fill_rect(scores, w, 0, 0, 20, 30, 1.0f);
  fill_rect(scores, w, 30, 40, 4, 5, 1.0f);
  return {LabelMap(w, h, std::vector<Label>(w * h, Label::kNotAnomaly)),
          ScoreMap(w, h, std::move(scores))};
}

TEST(GenerateMasks, AllBelowThresholdIsEmpty) {
  const std::vector pairs{two_blobs()};
  const auto bundle = generate_masks(pairs, 1.5, TrackConfig{});
  ASSERT_EQ(bundle.masks.size(), 1u);
  EXPECT_EQ(count(bundle.masks[0]), 0u);
}

TEST(GenerateMasks, AnomalyTrackKeepsOnlyLargeBlob) {
  const std::vector pairs{two_blobs()};
  const auto bundle =
      generate_masks(pairs, 0.5, TrackConfig::for_track(Track::kAnomaly));
  EXPECT_EQ(count(bundle.masks[0]), 600u);
  EXPECT_EQ(bundle.masks[0](0, 0), 1);
  EXPECT_EQ(bundle.masks[0](30, 40), 0);
  EXPECT_TRUE(bundle.filtered);
  EXPECT_EQ(bundle.min_size_used, 500u);
  EXPECT_DOUBLE_EQ(bundle.delta_used, 0.5);
}

TEST(GenerateMasks, ObstacleTrackKeepsBlobOfExactlyMinimumSize) {
  const std::size_t w = 20;
  std::vector<float> scores(w * w, 0.0f);
  fill_rect(scores, w, 2, 2, 5, 10, 0.9f);
  const std::vector pairs{
      std::pair{LabelMap(w, w, std::vector<Label>(w * w, Label::kNotAnomaly)),
                ScoreMap(w, w, scores)}};
  const auto config = TrackConfig::for_track(Track::kObstacle);
  EXPECT_EQ(count(generate_masks(pairs, 0.5, config).masks[0]), 50u);

  scores[2 * w + 2] = 0.0f;  // 49 px now.
  const std::vector smaller{
      std::pair{LabelMap(w, w, std::vector<Label>(w * w, Label::kNotAnomaly)),
                ScoreMap(w, w, scores)}};
  EXPECT_EQ(count(generate_masks(smaller, 0.5, config).masks[0]), 0u);
}

TEST(GenerateMasks, NoFilterEqualsPureThresholding) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto scene = testing::random_small_scene(seed);
    TrackConfig config;
    config.filtering = false;
    const std::vector pairs{std::pair{scene.labels, scene.scores}};
    const auto bundle = generate_masks(pairs, 0.5, config);
    EXPECT_EQ(bundle.masks[0],
              threshold_mask(scene.labels, scene.scores, 0.5, true));
    EXPECT_FALSE(bundle.filtered);
    EXPECT_EQ(bundle.min_size_used, 0u);
  }
}

TEST(GenerateMasks, NonFiniteThresholdIsRejected) {
  const std::vector pairs{two_blobs()};
  EXPECT_THROW(generate_masks(pairs, std::numeric_limits<double>::quiet_NaN(),
                              TrackConfig{}),
               Error);
}

TEST(GenerateMasks, DimensionMismatchIsRejected) {
  const std::vector pairs{std::pair{
      LabelMap(2, 2, std::vector<Label>(4, Label::kNotAnomaly)),
      ScoreMap(4, 1, std::vector<float>(4, 0.0f))}};
  try {
    generate_masks(pairs, 0.5, TrackConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(GenerateMasksProperty, NeverPredictsVoidAndIsMonotoneInThreshold) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto scene = testing::random_small_scene(seed);
    TrackConfig config;
    config.min_component_size = seed % 5;
    BinaryMask previous = generate_mask(scene.labels, scene.scores, -1.0, config);
    for (const double delta : {0.0, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0, 1.1}) {
      const BinaryMask m =
          generate_mask(scene.labels, scene.scores, delta, config);
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (scene.labels[i] == Label::kVoid) {
          ASSERT_EQ(m[i], 0) << "seed " << seed;
        }
        ASSERT_LE(m[i], previous[i]) << "seed " << seed << " delta " << delta;
      }
      for (const auto& c : extract_components(m).components()) {
        EXPECT_GE(c.size, config.min_component_size);
      }
      previous = m;
    }
  }
}

TEST(ThresholdMask, KeepVoidWhenClippingDisabled) {
  const auto labels = testing::labels_from({"vA."});
  const ScoreMap scores(3, 1, {0.9f, 0.9f, 0.1f});
  EXPECT_EQ(count(threshold_mask(labels, scores, 0.5, true)), 1u);
  EXPECT_EQ(count(threshold_mask(labels, scores, 0.5, false)), 2u);
}

TEST(ClearVoid, CountsClearedPixels) {
  const auto labels = testing::labels_from({"...", ".v.", "..A"});
  const auto mask = testing::mask_from({"...", ".#.", "..#"});
  const auto [cleaned, cleared] = clear_void(labels, mask);
  EXPECT_EQ(cleared, 1u);
  EXPECT_EQ(cleaned, testing::mask_from({"...", "...", "..#"}));
}

TEST(ClearVoid, ShapeMismatch) {
  EXPECT_THROW(clear_void(testing::labels_from({"..."}),
                          testing::mask_from({"#", "#", "#"})),
               Error);
}

}  // namespace
}  // namespace anoseg
