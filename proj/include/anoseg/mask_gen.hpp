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

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "anoseg/connectivity.hpp"
#include "anoseg/domain.hpp"

namespace anoseg {

struct MaskBundle {
  std::vector<BinaryMask> masks;
  double delta_used = 0.0;
  bool filtered = false;
  std::size_t min_size_used = 0;
  // Predicted pixels removed because they lay on void ground truth.
  std::size_t void_pixels_cleared = 0;
};

// Raw thresholding: score >= delta, with void pixels suppressed when
// `clip_void` is set.
inline BinaryMask threshold_mask(const LabelMap& labels,
                                 const ScoreMap& scores, double delta,
                                 bool clip_void = true) {
  const auto l = labels.cells();
  const auto s = scores.cells();
  std::vector<std::uint8_t> cells(l.size(), 0);
  for (std::size_t i = 0; i < l.size(); ++i) {
    const bool hit = static_cast<double>(s[i]) >= delta;
    cells[i] = (hit && !(clip_void && l[i] == Label::kVoid)) ? 1 : 0;
  }
  return BinaryMask(labels.width(), labels.height(), std::move(cells));
}

// Predicted components of one image under the default segmentation:
// threshold at delta, drop void, discard components below the track size.
inline ComponentSet predict_components(const LabelMap& labels,
                                       const ScoreMap& scores, double delta,
                                       const TrackConfig& config) {
  const BinaryMask raw =
      threshold_mask(labels, scores, delta, config.clip_void);
  return filter_by_size(extract_components(raw), config.effective_min_size());
}

inline BinaryMask generate_mask(const LabelMap& labels, const ScoreMap& scores,
                                double delta, const TrackConfig& config) {
  validate_pair(labels, scores);
  if (config.effective_min_size() <= 1) {
    return threshold_mask(labels, scores, delta, config.clip_void);
  }
  return to_mask(predict_components(labels, scores, delta, config));
}

inline MaskBundle generate_masks(
    std::span<const std::pair<LabelMap, ScoreMap>> pairs, double delta,
    const TrackConfig& config) {
  if (!std::isfinite(delta)) {
    throw Error(ErrorCode::kInvalidConfig, "threshold must be finite");
  }
  MaskBundle bundle;
  bundle.delta_used = delta;
  bundle.filtered = config.filtering;
  bundle.min_size_used = config.effective_min_size();
  bundle.masks.reserve(pairs.size());
  for (const auto& [labels, scores] : pairs) {
    bundle.masks.push_back(generate_mask(labels, scores, delta, config));
  }
  return bundle;
}

// Takes a competitor mask verbatim except for void pixels, which are
// cleared. Returns the cleaned mask and the number of cleared pixels.
inline std::pair<BinaryMask, std::size_t> clear_void(const LabelMap& labels,
                                                     const BinaryMask& mask) {
  if (!labels.same_shape(mask)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "mask " + std::to_string(mask.width()) + "x" +
                    std::to_string(mask.height()) + " vs labels " +
                    std::to_string(labels.width()) + "x" +
                    std::to_string(labels.height()));
  }
  std::vector<std::uint8_t> cells(mask.size(), 0);
  std::size_t cleared = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (mask[i] == 0) continue;
    if (labels[i] == Label::kVoid) {
      ++cleared;
    } else {
      cells[i] = 1;
    }
  }
  return {BinaryMask(mask.width(), mask.height(), std::move(cells)), cleared};
}

}  // namespace anoseg
