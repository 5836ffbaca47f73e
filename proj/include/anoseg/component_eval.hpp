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
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "anoseg/connectivity.hpp"
#include "anoseg/domain.hpp"

namespace anoseg {

// Integer ingredients of the adjusted IoU for one ground-truth component k:
//   intersection   = |k ∩ K̂(k)|
//   adjusted_union = |(k ∪ K̂(k)) \ A(k)|, A(k) = pixels of the other targets
//   plain_union    = |k ∪ K̂(k)|
// where K̂(k) is the union of predicted components touching k.
struct GtComponentScore {
  std::size_t image = 0;
  std::uint32_t component = 0;
  std::size_t size = 0;
  std::uint64_t intersection = 0;
  std::uint64_t adjusted_union = 0;
  std::uint64_t plain_union = 0;
  double siou = 0.0;
  double iou = 0.0;

  friend bool operator==(const GtComponentScore&,
                         const GtComponentScore&) = default;
};

// PPV of a predicted component: |k̂ ∩ K(k̂)| / |k̂|, where K(k̂) is the union of
// ground-truth components touching k̂.
struct PredComponentScore {
  std::size_t image = 0;
  std::uint32_t component = 0;
  std::size_t size = 0;
  std::uint64_t on_target = 0;
  double ppv = 0.0;

  friend bool operator==(const PredComponentScore&,
                         const PredComponentScore&) = default;
};

struct ComponentScores {
  std::vector<GtComponentScore> per_gt;
  std::vector<PredComponentScore> per_pred;
};

struct TauCounts {
  double tau = 0.0;
  std::uint64_t tp = 0;
  std::uint64_t fn = 0;
  std::uint64_t fp = 0;
  double f1 = 0.0;

  friend bool operator==(const TauCounts&, const TauCounts&) = default;
};

struct ComponentReport {
  double mean_siou = 0.0;
  double mean_ppv = 0.0;
  // Set when the dataset has no predicted component; mean_ppv is then 0.
  bool no_predictions = false;
  std::uint64_t gt_components = 0;
  std::uint64_t pred_components = 0;
  std::vector<TauCounts> per_tau;
  double f1_bar = 0.0;

  friend bool operator==(const ComponentReport&,
                         const ComponentReport&) = default;
};

inline double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0
                  : static_cast<double>(num) / static_cast<double>(den);
}

// Component-wise F1: 2tp / (2tp + fn + fp), 0 when nothing is there.
inline double f1_at(std::uint64_t tp, std::uint64_t fn, std::uint64_t fp) {
  return ratio(2 * tp, 2 * tp + fn + fp);
}

// Scores every ground-truth and predicted component of one image from a
// single pass over the pixel grid.
inline ComponentScores score_image(const ComponentSet& gt,
                                   const ComponentSet& pred,
                                   std::size_t image = 0) {
  if (gt.width() != pred.width() || gt.height() != pred.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "ground-truth and predicted components differ in size");
  }
  // Overlap |g ∩ p| for every touching pair, keyed (g << 32) | p.
  std::unordered_map<std::uint64_t, std::uint64_t> overlap;
  const auto gi = gt.index();
  const auto pi = pred.index();
  std::uint64_t run_key = 0;
  std::uint64_t run_len = 0;
  for (std::size_t i = 0; i < gi.size(); ++i) {
    if (gi[i] == ComponentSet::kNone || pi[i] == ComponentSet::kNone) continue;
    const std::uint64_t key =
        (static_cast<std::uint64_t>(gi[i]) << 32) |
        static_cast<std::uint32_t>(pi[i]);
    if (run_len > 0 && key != run_key) {
      overlap[run_key] += run_len;
      run_len = 0;
    }
    run_key = key;
    ++run_len;
  }
  if (run_len > 0) overlap[run_key] += run_len;

  std::vector<std::uint64_t> on_target(pred.count(), 0);
  std::vector<std::uint64_t> intersection(gt.count(), 0);
  for (const auto& [key, n] : overlap) {
    on_target[key & 0xffffffffu] += n;
    intersection[key >> 32] += n;
  }
  // Σ over K̂(g) of |p| and of the part of p lying off every target.
  std::vector<std::uint64_t> touched_size(gt.count(), 0);
  std::vector<std::uint64_t> touched_off_target(gt.count(), 0);
  for (const auto& [key, n] : overlap) {
    const auto g = key >> 32;
    const auto p = key & 0xffffffffu;
    touched_size[g] += pred[p].size;
    touched_off_target[g] += pred[p].size - on_target[p];
  }

  ComponentScores out;
  out.per_gt.reserve(gt.count());
  for (const auto& k : gt.components()) {
    GtComponentScore s;
    s.image = image;
    s.component = k.id;
    s.size = k.size;
    s.intersection = intersection[k.id];
    if (s.intersection > 0) {
      // A(k) ∩ k = ∅, so removing A(k) only drops predicted pixels that lie
      // on other targets.
      s.adjusted_union = k.size + touched_off_target[k.id];
      s.plain_union = k.size + touched_size[k.id] - s.intersection;
    } else {
      s.adjusted_union = k.size;
      s.plain_union = k.size;
    }
    s.siou = ratio(s.intersection, s.adjusted_union);
    s.iou = ratio(s.intersection, s.plain_union);
    out.per_gt.push_back(s);
  }
  out.per_pred.reserve(pred.count());
  for (const auto& k_hat : pred.components()) {
    PredComponentScore s;
    s.image = image;
    s.component = k_hat.id;
    s.size = k_hat.size;
    s.on_target = on_target[k_hat.id];
    s.ppv = ratio(s.on_target, k_hat.size);
    out.per_pred.push_back(s);
  }
  return out;
}

// sIoU of one ground-truth component, computed directly from pixel lookups.
inline double siou(const Component& k, const ComponentSet& gt_set,
                   const ComponentSet& pred_set) {
  std::unordered_set<std::uint32_t> touching;
  std::uint64_t inter = 0;
  for (const std::size_t i : gt_set.pixels(k.id)) {
    const auto p = pred_set.id_at(i);
    if (p == ComponentSet::kNone) continue;
    ++inter;
    touching.insert(static_cast<std::uint32_t>(p));
  }
  if (inter == 0) return 0.0;
  std::uint64_t denom = k.size;
  for (const auto p : touching) {
    for (const std::size_t i : pred_set.pixels(p)) {
      if (gt_set.id_at(i) == ComponentSet::kNone) ++denom;
    }
  }
  return ratio(inter, denom);
}

// Plain component IoU |k ∩ K̂(k)| / |k ∪ K̂(k)|.
inline double iou(const Component& k, const ComponentSet& gt_set,
                  const ComponentSet& pred_set) {
  std::unordered_set<std::uint32_t> touching;
  std::uint64_t inter = 0;
  for (const std::size_t i : gt_set.pixels(k.id)) {
    const auto p = pred_set.id_at(i);
    if (p == ComponentSet::kNone) continue;
    ++inter;
    touching.insert(static_cast<std::uint32_t>(p));
  }
  if (inter == 0) return 0.0;
  std::uint64_t uni = k.size;
  for (const auto p : touching) uni += pred_set[p].size;
  return ratio(inter, uni - inter);
}

inline double ppv(const Component& k_hat, const ComponentSet& pred_set,
                  const ComponentSet& gt_set) {
  std::uint64_t hits = 0;
  for (const std::size_t i : pred_set.pixels(k_hat.id)) {
    if (gt_set.id_at(i) != ComponentSet::kNone) ++hits;
  }
  return ratio(hits, k_hat.size);
}

struct Classification {
  std::uint64_t tp = 0;
  std::uint64_t fn = 0;
  std::uint64_t fp = 0;

  friend bool operator==(const Classification&,
                         const Classification&) = default;
};

// TP iff sIoU > tau; FP iff PPV <= tau.
inline Classification classify(const ComponentScores& scores, double tau) {
  Classification c;
  for (const auto& g : scores.per_gt) (g.siou > tau ? c.tp : c.fn)++;
  for (const auto& p : scores.per_pred) {
    if (p.ppv <= tau) ++c.fp;
  }
  return c;
}

inline Classification classify(const ComponentSet& gt_set,
                               const ComponentSet& pred_set, double tau) {
  return classify(score_image(gt_set, pred_set), tau);
}

// Dataset-level aggregation in image order.
class ComponentAccumulator {
 public:
  void add(const ComponentScores& image_scores) {
    scores_.per_gt.insert(scores_.per_gt.end(), image_scores.per_gt.begin(),
                          image_scores.per_gt.end());
    scores_.per_pred.insert(scores_.per_pred.end(),
                            image_scores.per_pred.begin(),
                            image_scores.per_pred.end());
  }

  void add(const ComponentSet& gt, const ComponentSet& pred,
           std::size_t image) {
    add(score_image(gt, pred, image));
  }

  const ComponentScores& scores() const noexcept { return scores_; }

  ComponentReport report(std::span<const double> tau_grid) const {
    if (scores_.per_gt.empty()) {
      throw Error(ErrorCode::kNoGroundTruthComponents,
                  "dataset has no ground-truth anomaly component");
    }
    ComponentReport r;
    r.gt_components = scores_.per_gt.size();
    r.pred_components = scores_.per_pred.size();
    double siou_sum = 0.0;
    for (const auto& g : scores_.per_gt) siou_sum += g.siou;
    r.mean_siou = siou_sum / static_cast<double>(scores_.per_gt.size());
    if (scores_.per_pred.empty()) {
      r.no_predictions = true;
    } else {
      double ppv_sum = 0.0;
      for (const auto& p : scores_.per_pred) ppv_sum += p.ppv;
      r.mean_ppv = ppv_sum / static_cast<double>(scores_.per_pred.size());
    }
    double f1_sum = 0.0;
    for (const double tau : tau_grid) {
      const Classification c = classify(scores_, tau);
      TauCounts t{tau, c.tp, c.fn, c.fp, f1_at(c.tp, c.fn, c.fp)};
      f1_sum += t.f1;
      r.per_tau.push_back(t);
    }
    r.f1_bar = tau_grid.empty() ? 0.0
                                : f1_sum / static_cast<double>(tau_grid.size());
    return r;
  }

 private:
  ComponentScores scores_;
};

inline ComponentReport evaluate_components(
    std::span<const ComponentSet> gt_sets,
    std::span<const ComponentSet> pred_sets, const TrackConfig& config) {
  if (gt_sets.size() != pred_sets.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "need one predicted set per ground-truth set");
  }
  config.validate();
  ComponentAccumulator acc;
  for (std::size_t i = 0; i < gt_sets.size(); ++i) {
    acc.add(gt_sets[i], pred_sets[i], i);
  }
  return acc.report(config.tau_grid);
}

struct SizeBin {
  std::size_t count = 0;
  std::size_t min_size = 0;
  std::size_t max_size = 0;
  double mean_siou = 0.0;
  // Share of components with no detected pixel (FN at tau = 0).
  double fn_ratio = 0.0;

  friend bool operator==(const SizeBin&, const SizeBin&) = default;
};

// Equal-count split of the size-sorted ground-truth components. Every bin
// holds floor(n / bins) components; the remainder goes to the first
// (smallest-size) bin.
inline std::vector<std::size_t> size_bin_counts(std::size_t components,
                                                std::size_t bins) {
  if (bins == 0 || components < bins) {
    throw Error(ErrorCode::kTooFewComponents,
                std::to_string(components) + " components for " +
                    std::to_string(bins) + " bins");
  }
  std::vector<std::size_t> counts(bins, components / bins);
  counts.front() += components % bins;
  return counts;
}

inline std::vector<SizeBin> size_stratified(const ComponentScores& scores,
                                            std::size_t bins = 8) {
  const auto counts = size_bin_counts(scores.per_gt.size(), bins);
  std::vector<GtComponentScore> sorted = scores.per_gt;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.size < b.size; });
  std::vector<SizeBin> out;
  std::size_t begin = 0;
  for (const std::size_t n : counts) {
    SizeBin bin;
    bin.count = n;
    bin.min_size = sorted[begin].size;
    bin.max_size = sorted[begin + n - 1].size;
    double sum = 0.0;
    std::size_t missed = 0;
    for (std::size_t i = begin; i < begin + n; ++i) {
      sum += sorted[i].siou;
      if (sorted[i].intersection == 0) ++missed;
    }
    bin.mean_siou = sum / static_cast<double>(n);
    bin.fn_ratio = static_cast<double>(missed) / static_cast<double>(n);
    out.push_back(bin);
    begin += n;
  }
  return out;
}

}  // namespace anoseg
