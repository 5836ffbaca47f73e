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

#include <array>
#include <set>

#include "anoseg/component_eval.hpp"
#include "anoseg/synthgen.hpp"
#include "test_util.hpp"

namespace anoseg {
namespace {

using testing::fill_rect;

ComponentSet gt_of(std::size_t w, std::size_t h,
                   const std::vector<std::array<std::size_t, 4>>& rects) {
  std::vector<std::uint8_t> cells(w * h, 0);
  for (const auto& [r, c, rh, cw] : rects) {
    fill_rect<std::uint8_t>(cells, w, r, c, rh, cw, 1);
  }
  return extract_components(BinaryMask(w, h, std::move(cells)));
}

TEST(Siou, PerfectMatchIsOne) {
  const auto gt = gt_of(20, 20, {{{2, 2, 5, 5}}});
  const auto pred = gt_of(20, 20, {{{2, 2, 5, 5}}});
  EXPECT_DOUBLE_EQ(siou(gt[0], gt, pred), 1.0);
  EXPECT_DOUBLE_EQ(iou(gt[0], gt, pred), 1.0);
  EXPECT_DOUBLE_EQ(ppv(pred[0], pred, gt), 1.0);
}

TEST(Siou, TargetCoveringHalfOfPrediction) {
  // Prediction 200×10; the only target is its left half.
  const auto gt = gt_of(200, 10, {{{0, 0, 10, 100}}});
  const auto pred = gt_of(200, 10, {{{0, 0, 10, 200}}});
  EXPECT_DOUBLE_EQ(siou(gt[0], gt, pred), 0.5);
  EXPECT_DOUBLE_EQ(iou(gt[0], gt, pred), 0.5);
  const auto s = score_image(gt, pred);
  EXPECT_DOUBLE_EQ(s.per_gt[0].siou, 0.5);
  EXPECT_DOUBLE_EQ(s.per_pred[0].ppv, 0.5);
}

TEST(Siou, TwoTargetsUnderOnePrediction) {
  // Prediction 200×10 strip; targets are columns 0–98 and 101–199.
  const auto gt = gt_of(200, 10, {{{0, 0, 10, 99}}, {{0, 101, 10, 99}}});
  const auto pred = gt_of(200, 10, {{{0, 0, 10, 200}}});
  ASSERT_EQ(gt.count(), 2u);
  EXPECT_DOUBLE_EQ(iou(gt[0], gt, pred), 990.0 / 2000.0);
  EXPECT_DOUBLE_EQ(siou(gt[0], gt, pred), 990.0 / 1010.0);
  const auto s = score_image(gt, pred);
  for (const auto& g : s.per_gt) {
    EXPECT_EQ(g.intersection, 990u);
    EXPECT_EQ(g.adjusted_union, 1010u);
    EXPECT_EQ(g.plain_union, 2000u);
    EXPECT_DOUBLE_EQ(g.siou, 990.0 / 1010.0);
    EXPECT_DOUBLE_EQ(g.iou, 0.495);
  }
  EXPECT_DOUBLE_EQ(s.per_pred[0].ppv, 1980.0 / 2000.0);
}

TEST(Siou, NoOverlapIsZero) {
  const auto gt = gt_of(20, 20, {{{0, 0, 3, 3}}});
  const auto pred = gt_of(20, 20, {{{10, 10, 3, 3}}});
  EXPECT_DOUBLE_EQ(siou(gt[0], gt, pred), 0.0);
  EXPECT_DOUBLE_EQ(ppv(pred[0], pred, gt), 0.0);
  const auto s = score_image(gt, pred);
  EXPECT_EQ(s.per_gt[0].adjusted_union, 9u);
  EXPECT_DOUBLE_EQ(s.per_gt[0].siou, 0.0);
}

TEST(Ppv, FortyOfHundredPixelsOnTarget) {
  const auto gt = gt_of(30, 30, {{{0, 0, 4, 30}}});
  const auto pred = gt_of(30, 30, {{{0, 5, 10, 10}}});
  EXPECT_DOUBLE_EQ(ppv(pred[0], pred, gt), 0.4);
  EXPECT_DOUBLE_EQ(score_image(gt, pred).per_pred[0].ppv, 0.4);
}

TEST(Classify, PerfectPrediction) {
  const auto gt = gt_of(30, 30, {{{0, 0, 3, 3}}, {{10, 10, 4, 4}}});
  for (const double tau : default_tau_grid()) {
    EXPECT_EQ(classify(gt, gt, tau), (Classification{2, 0, 0}));
  }
}

TEST(Classify, BoundariesAtOneHalf) {
  // sIoU = 0.5 exactly: FN at τ = 0.5. PPV = 0.5 exactly: FP at τ = 0.5.
  const auto gt = gt_of(200, 10, {{{0, 0, 10, 100}}});
  const auto pred = gt_of(200, 10, {{{0, 0, 10, 200}}});
  EXPECT_EQ(classify(gt, pred, 0.5), (Classification{0, 1, 1}));
  EXPECT_EQ(classify(gt, pred, 0.45), (Classification{1, 0, 0}));
}

TEST(F1At, Values) {
  EXPECT_DOUBLE_EQ(f1_at(10, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(f1_at(0, 5, 7), 0.0);
  EXPECT_DOUBLE_EQ(f1_at(0, 0, 0), 0.0);
  // 262 targets, 115 missed, 421 false positives.
  EXPECT_DOUBLE_EQ(f1_at(147, 115, 421), 294.0 / 830.0);
  EXPECT_NEAR(100.0 * f1_at(147, 115, 421), 35.4, 0.05);
}

TEST(EvaluateComponents, IdenticalPredictions) {
  const std::vector<ComponentSet> gt{gt_of(30, 30, {{{0, 0, 3, 3}}}),
                                     gt_of(30, 30, {{{5, 5, 8, 2}}})};
  const auto r = evaluate_components(gt, gt, TrackConfig{});
  EXPECT_DOUBLE_EQ(r.mean_siou, 1.0);
  EXPECT_DOUBLE_EQ(r.mean_ppv, 1.0);
  EXPECT_DOUBLE_EQ(r.f1_bar, 1.0);
  EXPECT_EQ(r.per_tau.size(), 11u);
  EXPECT_FALSE(r.no_predictions);
}

TEST(EvaluateComponents, EmptyPredictions) {
  const std::vector<ComponentSet> gt{gt_of(30, 30, {{{0, 0, 3, 3}}}),
                                     gt_of(30, 30, {{{5, 5, 8, 2}}})};
  const std::vector<ComponentSet> pred{gt_of(30, 30, {}), gt_of(30, 30, {})};
  const auto r = evaluate_components(gt, pred, TrackConfig{});
  EXPECT_DOUBLE_EQ(r.mean_siou, 0.0);
  EXPECT_DOUBLE_EQ(r.mean_ppv, 0.0);
  EXPECT_TRUE(r.no_predictions);
  EXPECT_DOUBLE_EQ(r.f1_bar, 0.0);
  for (const auto& t : r.per_tau) {
    EXPECT_EQ(t.tp, 0u);
    EXPECT_EQ(t.fn, 2u);
    EXPECT_EQ(t.fp, 0u);
  }
}

TEST(EvaluateComponents, NoGroundTruthIsAnError) {
  const std::vector<ComponentSet> none{gt_of(5, 5, {})};
  try {
    evaluate_components(none, none, TrackConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoGroundTruthComponents);
  }
}

TEST(EvaluateComponents, TwoHundredSixtyTwoTargets) {
  // 262 separated 2×2 squares spread over three images; random predictions.
  std::vector<ComponentSet> gt;
  std::vector<ComponentSet> pred;
  std::size_t placed = 0;
  for (std::uint64_t img = 0; placed < 262; ++img) {
    std::vector<std::array<std::size_t, 4>> rects;
    for (std::size_t r = 0; r + 2 <= 30 && placed < 262; r += 3) {
      for (std::size_t c = 0; c + 2 <= 30 && placed < 262; c += 3) {
        rects.push_back({r, c, 2, 2});
        ++placed;
      }
    }
    gt.push_back(gt_of(30, 30, rects));
    pred.push_back(extract_components(synth::random_mask(30, 30, img, 6, 0.05)));
  }
  const auto r = evaluate_components(gt, pred, TrackConfig{});
  EXPECT_EQ(r.gt_components, 262u);
  for (const auto& t : r.per_tau) EXPECT_EQ(t.tp + t.fn, 262u);
}

TEST(SizeBins, EqualCountsWithRemainderInFirstBin) {
  EXPECT_EQ(size_bin_counts(16, 8), std::vector<std::size_t>(8, 2));
  std::vector<std::size_t> expected(8, 32);
  expected[0] = 35;
  EXPECT_EQ(size_bin_counts(259, 8), expected);
  std::fill(expected.begin(), expected.end(), 48);
  expected[0] = 52;
  EXPECT_EQ(size_bin_counts(388, 8), expected);
  try {
    size_bin_counts(7, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooFewComponents);
  }
}

TEST(SizeBins, StratifiesBySize) {
  ComponentScores scores;
  for (std::size_t i = 0; i < 16; ++i) {
    GtComponentScore g;
    g.size = 100 - i;  // Deliberately unsorted input order.
    g.intersection = i % 2;
    g.siou = i % 2 == 0 ? 0.0 : 0.5;
    scores.per_gt.push_back(g);
  }
  const auto bins = size_stratified(scores);
  ASSERT_EQ(bins.size(), 8u);
  for (std::size_t b = 0; b < 8; ++b) {
    EXPECT_EQ(bins[b].count, 2u);
    EXPECT_EQ(bins[b].min_size, 85 + 2 * b);
    EXPECT_EQ(bins[b].max_size, 86 + 2 * b);
    EXPECT_DOUBLE_EQ(bins[b].mean_siou, 0.25);
    EXPECT_DOUBLE_EQ(bins[b].fn_ratio, 0.5);
  }
  for (auto& g : scores.per_gt) {
    g.intersection = 1;
    g.siou = 1.0;
  }
  for (const auto& bin : size_stratified(scores)) {
    EXPECT_DOUBLE_EQ(bin.fn_ratio, 0.0);
  }
}

struct RandomCase {
  std::vector<LabelMap> labels;
  std::vector<BinaryMask> masks;
};

RandomCase random_case(std::uint64_t seed) {
  synth::CounterRng rng(seed, 31);
  RandomCase out;
  const std::size_t n = rng.uniform_int(1, 3);
  for (std::size_t i = 0; i < n; ++i) {
    auto scene = testing::random_small_scene(seed * 8 + i);
    // Predictions from the scene's own scores plus random clutter.
    std::vector<std::uint8_t> cells(scene.labels.size());
    const auto clutter = synth::random_mask(
        scene.labels.width(), scene.labels.height(), seed * 8 + i, 2, 0.05);
    for (std::size_t p = 0; p < cells.size(); ++p) {
      cells[p] = (scene.scores[p] >= 0.5f || clutter[p]) ? 1 : 0;
    }
    out.masks.emplace_back(scene.labels.width(), scene.labels.height(),
                           std::move(cells));
    out.labels.push_back(std::move(scene.labels));
  }
  return out;
}

TEST(ComponentEvalProperty, MatchesSetOracle) {
  const auto grid = default_tau_grid();
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto c = random_case(seed);
    std::vector<ComponentSet> gt;
    std::vector<ComponentSet> pred;
    ComponentAccumulator acc;
    for (std::size_t i = 0; i < c.labels.size(); ++i) {
      gt.push_back(extract_components(c.labels[i]));
      pred.push_back(extract_components(c.masks[i]));
      acc.add(gt.back(), pred.back(), i);
    }
    const auto oracle = synth::oracle_component(c.labels, c.masks, grid);
    const auto& scores = acc.scores();
    ASSERT_EQ(scores.per_gt.size(), oracle.siou.size()) << "seed " << seed;
    ASSERT_EQ(scores.per_pred.size(), oracle.ppv.size()) << "seed " << seed;
    for (std::size_t k = 0; k < oracle.siou.size(); ++k) {
      ASSERT_DOUBLE_EQ(scores.per_gt[k].siou, oracle.siou[k]) << seed;
      ASSERT_DOUBLE_EQ(scores.per_gt[k].iou, oracle.iou[k]) << seed;
    }
    for (std::size_t k = 0; k < oracle.ppv.size(); ++k) {
      ASSERT_DOUBLE_EQ(scores.per_pred[k].ppv, oracle.ppv[k]) << seed;
    }
    // Direct per-component functions agree with the single-pass scorer.
    std::size_t k = 0;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      for (const auto& comp : gt[i].components()) {
        EXPECT_DOUBLE_EQ(siou(comp, gt[i], pred[i]), scores.per_gt[k].siou);
        EXPECT_DOUBLE_EQ(iou(comp, gt[i], pred[i]), scores.per_gt[k].iou);
        ++k;
      }
    }
    if (oracle.siou.empty()) continue;
    const auto report = acc.report(grid);
    EXPECT_EQ(report.per_tau, oracle.report.per_tau) << "seed " << seed;
    EXPECT_NEAR(report.f1_bar, oracle.report.f1_bar, 1e-12);
    EXPECT_NEAR(report.mean_siou, oracle.report.mean_siou, 1e-12);
    EXPECT_NEAR(report.mean_ppv, oracle.report.mean_ppv, 1e-12);
  }
}

TEST(ComponentEvalProperty, InvariantsHold) {
  const auto grid = default_tau_grid();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto c = random_case(seed);
    ComponentAccumulator acc;
    for (std::size_t i = 0; i < c.labels.size(); ++i) {
      acc.add(extract_components(c.labels[i]), extract_components(c.masks[i]),
              i);
    }
    for (const auto& g : acc.scores().per_gt) {
      EXPECT_GE(g.siou, g.iou);
      EXPECT_LE(g.siou, 1.0);
      EXPECT_GE(g.iou, 0.0);
    }
    if (acc.scores().per_gt.empty()) continue;
    const auto r = acc.report(grid);
    double sum = 0.0;
    for (std::size_t t = 0; t < r.per_tau.size(); ++t) {
      const auto& cur = r.per_tau[t];
      EXPECT_EQ(cur.tp + cur.fn, r.gt_components);
      sum += cur.f1;
      if (t == 0) continue;
      const auto& prev = r.per_tau[t - 1];
      EXPECT_LE(cur.tp, prev.tp);
      EXPECT_GE(cur.fp, prev.fp);
      EXPECT_LE(cur.f1, prev.f1);
    }
    EXPECT_NEAR(r.f1_bar, sum / static_cast<double>(r.per_tau.size()), 1e-12);
  }
}

TEST(ComponentEvalProperty, SingleTargetMakesSiouEqualIou) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = synth::random_mask(16, 16, seed, 3, 0.05);
    const auto gt = gt_of(16, 16, {{{4, 4, 5, 6}}});
    const auto s = score_image(gt, extract_components(m));
    EXPECT_DOUBLE_EQ(s.per_gt[0].siou, s.per_gt[0].iou);
  }
}

// The adjustment set may be read either as "all other targets" or as "other
// targets that are hit by a prediction". Inside k ∪ K̂(k) every other-target
// pixel is predicted, so both readings give the same score.
TEST(ComponentEvalProperty, AdjustmentReadingsCoincide) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto c = random_case(seed);
    for (std::size_t i = 0; i < c.labels.size(); ++i) {
      const auto gt = extract_components(c.labels[i]);
      const auto pred = extract_components(c.masks[i]);
      const auto s = score_image(gt, pred);
      for (const auto& k : gt.components()) {
        std::set<std::int32_t> touching;
        for (const auto p : gt.pixels(k.id)) {
          if (pred.id_at(p) != ComponentSet::kNone) touching.insert(pred.id_at(p));
        }
        // Gloss reading: drop only pixels of other targets that are hit.
        std::set<std::int32_t> hit_targets;
        for (std::size_t p = 0; p < gt.index().size(); ++p) {
          if (gt.id_at(p) != ComponentSet::kNone &&
              pred.id_at(p) != ComponentSet::kNone) {
            hit_targets.insert(gt.id_at(p));
          }
        }
        std::uint64_t inter = 0;
        std::uint64_t uni = 0;
        for (std::size_t p = 0; p < gt.index().size(); ++p) {
          const bool in_k = gt.id_at(p) == static_cast<std::int32_t>(k.id);
          const bool in_pred = touching.count(pred.id_at(p)) > 0;
          const auto other = gt.id_at(p);
          const bool excluded = !in_k && other != ComponentSet::kNone &&
                                hit_targets.count(other) > 0;
          if (in_k && in_pred) ++inter;
          if ((in_k || in_pred) && !excluded) ++uni;
        }
        const double gloss = inter == 0 ? 0.0
                                        : static_cast<double>(inter) /
                                              static_cast<double>(uni);
        EXPECT_DOUBLE_EQ(s.per_gt[k.id].siou, gloss) << "seed " << seed;
      }
    }
  }
}

TEST(ComponentEvalProperty, PerfectIffExactlyOneTargetCovered) {
  const auto gt = gt_of(30, 30, {{{2, 2, 4, 4}}, {{20, 20, 3, 3}}});
  auto s = score_image(gt, gt_of(30, 30, {{{2, 2, 4, 4}}}));
  EXPECT_DOUBLE_EQ(s.per_gt[0].siou, 1.0);
  EXPECT_DOUBLE_EQ(s.per_gt[0].iou, 1.0);
  // One extra predicted pixel attached to the target breaks perfection.
  s = score_image(gt, gt_of(30, 30, {{{2, 2, 4, 4}}, {{6, 2, 1, 1}}}));
  EXPECT_LT(s.per_gt[0].siou, 1.0);
  // One missing pixel too.
  s = score_image(gt, gt_of(30, 30, {{{2, 2, 4, 3}}, {{2, 5, 3, 1}}}));
  EXPECT_LT(s.per_gt[0].siou, 1.0);
}

}  // namespace
}  // namespace anoseg
