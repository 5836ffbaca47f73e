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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anoseg/error.hpp"

namespace anoseg {

// Ground-truth classes. Void is a class of its own so that it can never be
// mistaken for NotAnomaly.
enum class Label : std::uint8_t { kNotAnomaly = 0, kAnomaly = 1, kVoid = 2 };

// Immutable row-major image of `T`.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(std::size_t width, std::size_t height, std::vector<T> cells)
      : width_(width), height_(height), cells_(std::move(cells)) {
    if (width_ == 0 || height_ == 0) {
      throw Error(ErrorCode::kDimensionMismatch, "grid must be non-empty");
    }
    if (cells_.size() != width_ * height_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "cell count " + std::to_string(cells_.size()) +
                      " != " + std::to_string(width_) + "x" +
                      std::to_string(height_));
    }
  }

  Grid(std::size_t width, std::size_t height, T fill)
      : Grid(width, height, std::vector<T>(width * height, fill)) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return cells_.size(); }

  const T& operator()(std::size_t row, std::size_t col) const {
    return cells_[row * width_ + col];
  }
  const T& operator[](std::size_t index) const { return cells_[index]; }

  std::span<const T> cells() const noexcept { return cells_; }

  bool same_shape(std::size_t width, std::size_t height) const noexcept {
    return width_ == width && height_ == height;
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return same_shape(other.width(), other.height());
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> cells_;
};

using LabelMap = Grid<Label>;
using ScoreMap = Grid<float>;
// 1 = predicted anomaly, 0 = not predicted.
using BinaryMask = Grid<std::uint8_t>;

enum class Track { kAnomaly, kObstacle };

inline std::string_view to_string(Track track) {
  return track == Track::kAnomaly ? "anomaly" : "obstacle";
}

inline Track parse_track(std::string_view text) {
  if (text == "anomaly" || text == "AnomalyTrack") return Track::kAnomaly;
  if (text == "obstacle" || text == "ObstacleTrack") return Track::kObstacle;
  throw Error(ErrorCode::kInvalidConfig,
              "unknown track '" + std::string(text) + "'");
}

struct ScoreMode {
  enum class Kind { kExact, kBinned };

  Kind kind = Kind::kExact;
  std::size_t bin_count = 4096;

  static ScoreMode exact() { return {}; }
  static ScoreMode binned(std::size_t bins) { return {Kind::kBinned, bins}; }

  bool is_exact() const noexcept { return kind == Kind::kExact; }
  friend bool operator==(const ScoreMode&, const ScoreMode&) = default;
};

// The component-level thresholds {0.25, 0.30, ..., 0.75}.
inline std::vector<double> default_tau_grid() {
  std::vector<double> grid;
  for (int step = 0; step <= 10; ++step) {
    grid.push_back(static_cast<double>(25 + 5 * step) / 100.0);
  }
  return grid;
}

inline std::size_t default_min_component_size(Track track) {
  return track == Track::kAnomaly ? 500 : 50;
}

struct TrackConfig {
  Track track = Track::kAnomaly;
  std::size_t min_component_size = 500;
  // When false, predicted components are never size-filtered.
  bool filtering = true;
  // When true, predicted pixels on void ground truth are cleared before
  // component extraction.
  bool clip_void = true;
  std::vector<double> tau_grid = default_tau_grid();
  ScoreMode score_mode;

  static TrackConfig for_track(Track track) {
    TrackConfig config;
    config.track = track;
    config.min_component_size = default_min_component_size(track);
    return config;
  }

  // Size actually applied to predicted components.
  std::size_t effective_min_size() const noexcept {
    return filtering ? min_component_size : 0;
  }

  void validate() const {
    if (tau_grid.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "tau grid is empty");
    }
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
      const double tau = tau_grid[i];
      if (!(tau >= 0.0 && tau < 1.0)) {
        throw Error(ErrorCode::kInvalidConfig,
                    "tau " + std::to_string(tau) + " outside [0,1)");
      }
      if (i > 0 && !(tau_grid[i - 1] < tau)) {
        throw Error(ErrorCode::kInvalidConfig,
                    "tau grid must be strictly increasing");
      }
    }
    if (!score_mode.is_exact() && score_mode.bin_count < 2) {
      throw Error(ErrorCode::kInvalidConfig, "binned mode needs >= 2 bins");
    }
  }

  friend bool operator==(const TrackConfig&, const TrackConfig&) = default;
};

// Confusion counts at one pixel threshold, void excluded.
struct PixelTally {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  friend bool operator==(const PixelTally&, const PixelTally&) = default;
};

inline PixelTally tally_at(const LabelMap& labels, const ScoreMap& scores,
                           double threshold) {
  PixelTally tally;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    switch (labels[i]) {
      case Label::kAnomaly: (predicted ? tally.tp : tally.fn)++; break;
      case Label::kNotAnomaly: (predicted ? tally.fp : tally.tn)++; break;
      case Label::kVoid: break;
    }
  }
  return tally;
}

inline void check_finite(const ScoreMap& scores) {
  const auto cells = scores.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!std::isfinite(cells[i])) {
      throw Error(ErrorCode::kNonFiniteScore,
                  "non-finite score at pixel index " + std::to_string(i));
    }
  }
}

// A label/score pair whose dimensions agree and whose scores are finite.
class ValidatedPair {
 public:
  const LabelMap& labels() const noexcept { return *labels_; }
  const ScoreMap& scores() const noexcept { return *scores_; }

 private:
  friend ValidatedPair validate_pair(const LabelMap&, const ScoreMap&);
  ValidatedPair(const LabelMap& labels, const ScoreMap& scores)
      : labels_(&labels), scores_(&scores) {}

  const LabelMap* labels_;
  const ScoreMap* scores_;
};

inline ValidatedPair validate_pair(const LabelMap& labels,
                                   const ScoreMap& scores) {
  if (!labels.same_shape(scores)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "labels " + std::to_string(labels.width()) + "x" +
                    std::to_string(labels.height()) + " vs scores " +
                    std::to_string(scores.width()) + "x" +
                    std::to_string(scores.height()));
  }
  check_finite(scores);
  return ValidatedPair(labels, scores);
}

}  // namespace anoseg
