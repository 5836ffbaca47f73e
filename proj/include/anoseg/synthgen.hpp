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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <iterator>
#include <numbers>
#include <set>
#include <span>
#include <vector>

#include "anoseg/component_eval.hpp"
#include "anoseg/domain.hpp"

namespace anoseg::synth {

// Counter-based generator: draw n of stream s under seed k is a pure
// function of (k, s, n), so results do not depend on platform or call order
// across streams.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ull))) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t at(std::uint64_t counter) const {
    return mix(key_ + counter * 0xd1b54a32d192ed03ull);
  }

  std::uint64_t next() { return at(counter_++); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi].
  std::size_t uniform_int(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(uniform() *
                                         static_cast<double>(hi - lo + 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct SceneSpec {
  std::size_t width = 64;
  std::size_t height = 64;
  std::size_t component_count = 3;
  // Side lengths of each component's box are drawn log-uniformly here.
  std::size_t min_extent = 2;
  std::size_t max_extent = 12;
  // Fraction of rows, from the top, labelled void.
  double void_fraction = 0.0;
  // Detector model.
  double hit_probability = 1.0;
  double noise = 0.0;
  std::size_t blur_radius = 0;
  double false_alarm_rate = 0.0;
  double elevation = 1.0;
  // When > 0, scores are rounded to multiples of 1/score_levels.
  std::size_t score_levels = 0;
  std::uint64_t seed = 0;
};

struct Scene {
  LabelMap labels;
  ScoreMap scores;
  std::vector<std::size_t> component_sizes;
  std::vector<bool> hit;
  std::size_t anomaly_pixels = 0;
  std::size_t void_pixels = 0;
};

namespace detail {

struct Box {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  bool ellipse = false;

  // Boxes separated by at least one pixel never touch under 8-connectivity.
  bool touches(const Box& o) const {
    return row <= o.row + o.height && o.row <= row + height &&
           col <= o.col + o.width && o.col <= col + width;
  }

  template <typename Fn>
  void for_each_pixel(std::size_t image_width, Fn&& fn) const {
    const double cy = (static_cast<double>(height) - 1.0) / 2.0;
    const double cx = (static_cast<double>(width) - 1.0) / 2.0;
    const double ry = static_cast<double>(height) / 2.0;
    const double rx = static_cast<double>(width) / 2.0;
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        if (ellipse) {
          const double dy = (static_cast<double>(r) - cy) / ry;
          const double dx = (static_cast<double>(c) - cx) / rx;
          if (dy * dy + dx * dx > 1.0) continue;
        }
        fn((row + r) * image_width + col + c);
      }
    }
  }
};

inline std::size_t log_uniform_extent(CounterRng& rng, std::size_t lo,
                                      std::size_t hi) {
  if (hi <= lo) return lo;
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi) + 1.0);
  const auto v = static_cast<std::size_t>(std::exp(a + (b - a) * rng.uniform()));
  return std::clamp(v, lo, hi);
}

// Box blur of the given radius along rows, then columns; borders clamp.
inline void box_blur(std::vector<float>& cells, std::size_t width,
                     std::size_t height, std::size_t radius) {
  if (radius == 0) return;
  const auto r = static_cast<std::ptrdiff_t>(radius);
  const double norm = 1.0 / static_cast<double>(2 * radius + 1);
  std::vector<float> tmp(cells.size());
  auto pass = [&](const std::vector<float>& src, std::vector<float>& dst,
                  std::size_t lines, std::size_t length, std::size_t stride,
                  std::size_t step) {
    const auto n = static_cast<std::ptrdiff_t>(length);
    for (std::size_t line = 0; line < lines; ++line) {
      const std::size_t base = line * stride;
      auto at = [&](std::ptrdiff_t k) {
        return static_cast<double>(
            src[base + static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
                           k, 0, n - 1)) *
                           step]);
      };
      double sum = 0.0;
      for (std::ptrdiff_t k = -r; k <= r; ++k) sum += at(k);
      for (std::ptrdiff_t k = 0; k < n; ++k) {
        dst[base + static_cast<std::size_t>(k) * step] =
            static_cast<float>(sum * norm);
        sum += at(k + r + 1) - at(k - r);
      }
    }
  };
  pass(cells, tmp, height, width, width, 1);
  pass(tmp, cells, width, height, 1, width);
}

}  // namespace detail

// Places separated rectangular or elliptic components below an optional void
// band and synthesizes a score field: Gaussian noise, an elevation on every
// "hit" component, false-alarm blobs, then an optional box blur.
inline Scene generate_scene(const SceneSpec& spec) {
  if (spec.width == 0 || spec.height == 0 || spec.min_extent == 0 ||
      spec.max_extent < spec.min_extent) {
    throw Error(ErrorCode::kUnsatisfiableSpec, "bad scene geometry");
  }
  CounterRng layout(spec.seed, 1);
  CounterRng detector(spec.seed, 2);
  CounterRng noise(spec.seed, 3);

  const std::size_t w = spec.width;
  const std::size_t h = spec.height;
  const auto void_rows = static_cast<std::size_t>(
      std::llround(std::clamp(spec.void_fraction, 0.0, 1.0) *
                   static_cast<double>(h)));

  std::vector<Label> labels(w * h, Label::kNotAnomaly);
  std::fill(labels.begin(),
            labels.begin() + static_cast<std::ptrdiff_t>(void_rows * w),
            Label::kVoid);

  std::vector<detail::Box> boxes;
  for (std::size_t k = 0; k < spec.component_count; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      detail::Box b;
      b.height = detail::log_uniform_extent(layout, spec.min_extent,
                                            spec.max_extent);
      b.width = detail::log_uniform_extent(layout, spec.min_extent,
                                           spec.max_extent);
      b.ellipse = layout.bernoulli(0.5) && b.height > 2 && b.width > 2;
      if (void_rows + b.height > h || b.width > w) continue;
      b.row = layout.uniform_int(void_rows, h - b.height);
      b.col = layout.uniform_int(0, w - b.width);
      if (std::none_of(boxes.begin(), boxes.end(),
                       [&](const detail::Box& o) { return b.touches(o); })) {
        boxes.push_back(b);
        placed = true;
      }
    }
    if (!placed) {
      throw Error(ErrorCode::kUnsatisfiableSpec,
                  "could not place component " + std::to_string(k));
    }
  }

  Scene scene;
  std::vector<float> scores(w * h, 0.0f);
  if (spec.noise > 0.0) {
    for (auto& s : scores) s = static_cast<float>(spec.noise * noise.normal());
  }
  for (const auto& b : boxes) {
    const bool hit = detector.bernoulli(spec.hit_probability);
    std::size_t size = 0;
    b.for_each_pixel(w, [&](std::size_t i) {
      labels[i] = Label::kAnomaly;
      ++size;
      if (hit) scores[i] += static_cast<float>(spec.elevation);
    });
    scene.component_sizes.push_back(size);
    scene.hit.push_back(hit);
  }
  if (spec.false_alarm_rate > 0.0) {
    const double whole = std::floor(spec.false_alarm_rate);
    std::size_t blobs = static_cast<std::size_t>(whole);
    if (detector.bernoulli(spec.false_alarm_rate - whole)) ++blobs;
    for (std::size_t i = 0; i < blobs; ++i) {
      detail::Box b;
      b.height = std::min(h, detail::log_uniform_extent(
                                 detector, spec.min_extent, spec.max_extent));
      b.width = std::min(w, detail::log_uniform_extent(
                                detector, spec.min_extent, spec.max_extent));
      b.row = detector.uniform_int(0, h - b.height);
      b.col = detector.uniform_int(0, w - b.width);
      b.ellipse = detector.bernoulli(0.5);
      b.for_each_pixel(w, [&](std::size_t j) {
        scores[j] += static_cast<float>(spec.elevation);
      });
    }
  }
  detail::box_blur(scores, w, h, spec.blur_radius);
  if (spec.score_levels > 0) {
    const auto levels = static_cast<float>(spec.score_levels);
    for (auto& s : scores) s = std::round(s * levels) / levels;
  }

  for (const auto l : labels) {
    if (l == Label::kAnomaly) ++scene.anomaly_pixels;
    if (l == Label::kVoid) ++scene.void_pixels;
  }
  scene.labels = LabelMap(w, h, std::move(labels));
  scene.scores = ScoreMap(w, h, std::move(scores));
  return scene;
}

// Random union of rectangles plus isolated pixels, for component tests.
inline BinaryMask random_mask(std::size_t width, std::size_t height,
                              std::uint64_t seed, std::size_t rectangles = 3,
                              double salt = 0.02) {
  CounterRng rng(seed, 7);
  std::vector<std::uint8_t> cells(width * height, 0);
  for (std::size_t k = 0; k < rectangles; ++k) {
    const std::size_t bh = rng.uniform_int(1, std::max<std::size_t>(1, height / 2));
    const std::size_t bw = rng.uniform_int(1, std::max<std::size_t>(1, width / 2));
    const std::size_t r0 = rng.uniform_int(0, height - bh);
    const std::size_t c0 = rng.uniform_int(0, width - bw);
    for (std::size_t r = r0; r < r0 + bh; ++r) {
      for (std::size_t c = c0; c < c0 + bw; ++c) cells[r * width + c] = 1;
    }
  }
  for (auto& cell : cells) {
    if (rng.bernoulli(salt)) cell = 1;
  }
  return BinaryMask(width, height, std::move(cells));
}

// ---------------------------------------------------------------------------
// Brute-force oracles. Quadratic in pixel count; intended for small scenes.

struct OraclePixel {
  double auprc = 0.0;
  double fpr95 = 1.0;
  double f1_star = 0.0;
  double delta_star = 0.0;
};

// Re-tallies the confusion matrix from scratch at every distinct score and
// applies the textbook definitions.
inline OraclePixel oracle_pixel(
    std::span<const std::pair<LabelMap, ScoreMap>> pairs) {
  std::vector<std::pair<float, bool>> pixels;
  for (const auto& [labels, scores] : pairs) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == Label::kVoid) continue;
      pixels.emplace_back(scores[i], labels[i] == Label::kAnomaly);
    }
  }
  std::set<float, std::greater<>> thresholds;
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;
  for (const auto& [s, positive] : pixels) {
    thresholds.insert(s);
    (positive ? positives : negatives)++;
  }
  if (positives == 0) throw Error(ErrorCode::kNoPositives, "oracle");
  if (negatives == 0) throw Error(ErrorCode::kNoNegatives, "oracle");

  OraclePixel out;
  double previous_recall = 0.0;
  bool fpr_done = false;
  bool have_best = false;
  std::uint64_t best_tp = 0;
  std::uint64_t best_fp = 0;
  for (const float delta : thresholds) {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    for (const auto& [s, positive] : pixels) {
      if (s >= delta) (positive ? tp : fp)++;
    }
    const double precision =
        static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall =
        static_cast<double>(tp) / static_cast<double>(positives);
    out.auprc += precision * (recall - previous_recall);
    previous_recall = recall;
    if (!fpr_done && 100 * tp >= 95 * positives) {
      fpr_done = true;
      out.fpr95 = static_cast<double>(fp) / static_cast<double>(negatives);
    }
    if (precision + recall > 0.0) {
      // F1 comparison done exactly: tp/(tp+fp+P) ordering.
      const bool better =
          !have_best ||
          tp * (best_tp + best_fp + positives) > best_tp * (tp + fp + positives);
      if (better) {
        have_best = true;
        best_tp = tp;
        best_fp = fp;
        out.delta_star = delta;
        out.f1_star = 2.0 * precision * recall / (precision + recall);
      }
    }
  }
  return out;
}

// Pixel sets as sorted raster indices.
using PixelSet = std::set<std::size_t>;

// 8-connected components by breadth-first flood fill, in raster order of
// each component's first pixel.
template <typename IsForeground>
std::vector<PixelSet> flood_fill_components(std::size_t width,
                                            std::size_t height,
                                            IsForeground&& fg) {
  std::vector<bool> seen(width * height, false);
  std::vector<PixelSet> out;
  for (std::size_t start = 0; start < width * height; ++start) {
    if (seen[start] || !fg(start)) continue;
    PixelSet comp;
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      comp.insert(i);
      const auto r = static_cast<std::ptrdiff_t>(i / width);
      const auto c = static_cast<std::ptrdiff_t>(i % width);
      for (std::ptrdiff_t dr = -1; dr <= 1; ++dr) {
        for (std::ptrdiff_t dc = -1; dc <= 1; ++dc) {
          const auto nr = r + dr;
          const auto nc = c + dc;
          if (nr < 0 || nc < 0 || nr >= static_cast<std::ptrdiff_t>(height) ||
              nc >= static_cast<std::ptrdiff_t>(width)) {
            continue;
          }
          const auto j = static_cast<std::size_t>(nr) * width +
                         static_cast<std::size_t>(nc);
          if (!seen[j] && fg(j)) {
            seen[j] = true;
            queue.push_back(j);
          }
        }
      }
    }
    out.push_back(std::move(comp));
  }
  return out;
}

inline PixelSet set_union(const PixelSet& a, const PixelSet& b) {
  PixelSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::inserter(out, out.end()));
  return out;
}
inline PixelSet set_intersection(const PixelSet& a, const PixelSet& b) {
  PixelSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}
inline PixelSet set_difference(const PixelSet& a, const PixelSet& b) {
  PixelSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::inserter(out, out.end()));
  return out;
}

struct OracleComponent {
  std::vector<double> siou;  // Per ground-truth component, dataset order.
  std::vector<double> iou;
  std::vector<double> ppv;   // Per predicted component.
  ComponentReport report;
};

// Materializes k, K̂(k), A(k) and K(k̂) as explicit pixel sets and evaluates
// the adjusted IoU and PPV literally. Masks are used as given.
inline OracleComponent oracle_component(std::span<const LabelMap> labels,
                                        std::span<const BinaryMask> masks,
                                        std::span<const double> tau_grid) {
  OracleComponent out;
  for (std::size_t img = 0; img < labels.size(); ++img) {
    const LabelMap& l = labels[img];
    const BinaryMask& m = masks[img];
    const auto gt = flood_fill_components(
        l.width(), l.height(),
        [&](std::size_t i) { return l[i] == Label::kAnomaly; });
    const auto pred = flood_fill_components(
        m.width(), m.height(), [&](std::size_t i) { return m[i] != 0; });

    for (std::size_t a = 0; a < gt.size(); ++a) {
      const PixelSet& k = gt[a];
      PixelSet k_hat_union;
      for (const auto& p : pred) {
        if (!set_intersection(p, k).empty()) {
          k_hat_union = set_union(k_hat_union, p);
        }
      }
      PixelSet adjustment;
      for (std::size_t b = 0; b < gt.size(); ++b) {
        if (b != a) adjustment = set_union(adjustment, gt[b]);
      }
      const PixelSet inter = set_intersection(k, k_hat_union);
      const PixelSet uni = set_union(k, k_hat_union);
      const PixelSet adjusted = set_difference(uni, adjustment);
      out.siou.push_back(inter.empty() ? 0.0
                                       : static_cast<double>(inter.size()) /
                                             static_cast<double>(adjusted.size()));
      out.iou.push_back(inter.empty() ? 0.0
                                      : static_cast<double>(inter.size()) /
                                            static_cast<double>(uni.size()));
    }
    for (const auto& p : pred) {
      PixelSet targets;
      for (const auto& k : gt) {
        if (!set_intersection(p, k).empty()) targets = set_union(targets, k);
      }
      out.ppv.push_back(static_cast<double>(set_intersection(p, targets).size()) /
                        static_cast<double>(p.size()));
    }
  }

  ComponentReport& r = out.report;
  r.gt_components = out.siou.size();
  r.pred_components = out.ppv.size();
  double sum = 0.0;
  for (const double v : out.siou) sum += v;
  r.mean_siou = out.siou.empty() ? 0.0 : sum / static_cast<double>(out.siou.size());
  sum = 0.0;
  for (const double v : out.ppv) sum += v;
  r.no_predictions = out.ppv.empty();
  r.mean_ppv = out.ppv.empty() ? 0.0 : sum / static_cast<double>(out.ppv.size());
  double f1_sum = 0.0;
  for (const double tau : tau_grid) {
    TauCounts t;
    t.tau = tau;
    for (const double v : out.siou) (v > tau ? t.tp : t.fn)++;
    for (const double v : out.ppv) {
      if (v <= tau) ++t.fp;
    }
    const std::uint64_t denom = 2 * t.tp + t.fn + t.fp;
    t.f1 = denom == 0 ? 0.0
                      : static_cast<double>(2 * t.tp) / static_cast<double>(denom);
    f1_sum += t.f1;
    r.per_tau.push_back(t);
  }
  r.f1_bar = tau_grid.empty() ? 0.0 : f1_sum / static_cast<double>(tau_grid.size());
  return out;
}

}  // namespace anoseg::synth
