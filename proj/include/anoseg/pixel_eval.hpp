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
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "anoseg/domain.hpp"

namespace anoseg {

namespace detail {

// Maps a float to an unsigned key with the same ordering.
inline std::uint32_t order_key(float value) {
  const auto bits = std::bit_cast<std::uint32_t>(value);
  return (bits & 0x80000000u) ? ~bits : (bits | 0x80000000u);
}

inline float from_order_key(std::uint32_t key) {
  const std::uint32_t bits =
      (key & 0x80000000u) ? (key & 0x7fffffffu) : ~key;
  return std::bit_cast<float>(bits);
}

// LSD radix sort, 8 bits per pass; passes where every key shares the same
// byte are skipped.
inline void radix_sort_descending(std::vector<float>& values) {
  if (values.size() < 2) return;
  std::vector<std::uint32_t> keys(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    // Invert so that an ascending sort yields descending values.
    keys[i] = ~order_key(values[i]);
  }
  std::vector<std::uint32_t> scratch(keys.size());
  for (int shift = 0; shift < 32; shift += 8) {
    std::size_t counts[256] = {};
    for (const auto k : keys) ++counts[(k >> shift) & 0xffu];
    if (counts[(keys[0] >> shift) & 0xffu] == keys.size()) continue;
    std::size_t offset = 0;
    for (auto& c : counts) {
      const std::size_t n = c;
      c = offset;
      offset += n;
    }
    for (const auto k : keys) scratch[counts[(k >> shift) & 0xffu]++] = k;
    keys.swap(scratch);
  }
  scratch = {};
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = from_order_key(~keys[i]);
  }
}

}  // namespace detail

// Pooled non-void pixel scores across a dataset, split by ground truth.
// Void pixels never enter the pool.
class PixelPool {
 public:
  void add(const ValidatedPair& pair) {
    const auto labels = pair.labels().cells();
    const auto scores = pair.scores().cells();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      switch (labels[i]) {
        case Label::kAnomaly: positives_.push_back(scores[i]); break;
        case Label::kNotAnomaly: negatives_.push_back(scores[i]); break;
        case Label::kVoid: break;
      }
    }
    sorted_ = false;
  }

  void add(const LabelMap& labels, const ScoreMap& scores) {
    add(validate_pair(labels, scores));
  }

  // Appends another pool; the order of `add`/`merge` calls fixes the stream.
  void merge(const PixelPool& other) {
    positives_.insert(positives_.end(), other.positives_.begin(),
                      other.positives_.end());
    negatives_.insert(negatives_.end(), other.negatives_.begin(),
                      other.negatives_.end());
    sorted_ = false;
  }

  std::size_t size() const noexcept {
    return positives_.size() + negatives_.size();
  }
  std::uint64_t positive_count() const noexcept { return positives_.size(); }
  std::uint64_t negative_count() const noexcept { return negatives_.size(); }

  std::span<const float> positives() const noexcept { return positives_; }
  std::span<const float> negatives() const noexcept { return negatives_; }

  // Sorts both halves in descending order. Idempotent.
  void sort() {
    if (sorted_) return;
    detail::radix_sort_descending(positives_);
    detail::radix_sort_descending(negatives_);
    sorted_ = true;
  }
  bool sorted() const noexcept { return sorted_; }

 private:
  std::vector<float> positives_;
  std::vector<float> negatives_;
  bool sorted_ = false;
};

// Pools all pairs in order. Throws NoPositives when no anomaly pixel
// survives void exclusion.
inline PixelPool pool(std::span<const std::pair<LabelMap, ScoreMap>> pairs) {
  PixelPool out;
  for (const auto& [labels, scores] : pairs) out.add(labels, scores);
  if (out.positive_count() == 0) {
    throw Error(ErrorCode::kNoPositives,
                "no anomaly pixels after void exclusion");
  }
  return out;
}

// One point of the descending sweep: pixels with score >= threshold are
// predicted anomalous.
struct SweepStep {
  double threshold = 0.0;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
};

inline void require_curve_preconditions(const PixelPool& pool) {
  if (pool.positive_count() == 0) {
    throw Error(ErrorCode::kNoPositives, "no anomaly pixels in the pool");
  }
  if (pool.negative_count() == 0) {
    throw Error(ErrorCode::kNoNegatives, "no non-anomaly pixels in the pool");
  }
}

// Visits every distinct score value in descending order with cumulative
// counts. The pool is sorted in place.
template <typename Visitor>
void sweep_exact(PixelPool& pool, Visitor&& visit) {
  pool.sort();
  const auto pos = pool.positives();
  const auto neg = pool.negatives();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < pos.size() || j < neg.size()) {
    float threshold;
    if (i == pos.size()) {
      threshold = neg[j];
    } else if (j == neg.size()) {
      threshold = pos[i];
    } else {
      threshold = std::max(pos[i], neg[j]);
    }
    while (i < pos.size() && pos[i] == threshold) ++i;
    while (j < neg.size() && neg[j] == threshold) ++j;
    visit(SweepStep{threshold, i, j});
  }
}

// Min-max normalized histogram sweep. Each non-empty bin contributes one
// step whose threshold is the bin's lower edge in score units.
template <typename Visitor>
void sweep_binned(const PixelPool& pool, std::size_t bins, Visitor&& visit) {
  if (bins < 2) {
    throw Error(ErrorCode::kInvalidConfig, "binned mode needs >= 2 bins");
  }
  float lo = std::numeric_limits<float>::infinity();
  float hi = -std::numeric_limits<float>::infinity();
  for (const auto half : {pool.positives(), pool.negatives()}) {
    for (const float s : half) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  }
  const double range = static_cast<double>(hi) - static_cast<double>(lo);
  auto bin_of = [&](float s) -> std::size_t {
    if (range <= 0.0) return 0;
    const double t = (static_cast<double>(s) - lo) / range;
    return std::min(bins - 1, static_cast<std::size_t>(t * bins));
  };
  std::vector<std::uint64_t> pos_hist(bins, 0);
  std::vector<std::uint64_t> neg_hist(bins, 0);
  for (const float s : pool.positives()) ++pos_hist[bin_of(s)];
  for (const float s : pool.negatives()) ++neg_hist[bin_of(s)];

  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t b = bins; b-- > 0;) {
    if (pos_hist[b] == 0 && neg_hist[b] == 0) continue;
    tp += pos_hist[b];
    fp += neg_hist[b];
    const double edge = static_cast<double>(lo) +
                        range * static_cast<double>(b) / static_cast<double>(bins);
    visit(SweepStep{edge, tp, fp});
  }
}

template <typename Visitor>
void sweep(PixelPool& pool, const ScoreMode& mode, Visitor&& visit) {
  require_curve_preconditions(pool);
  if (mode.is_exact()) {
    sweep_exact(pool, visit);
  } else {
    sweep_binned(pool, mode.bin_count, visit);
  }
}

struct CurvePoint {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

// Precision-recall curve over a descending threshold sweep. Stores counts and
// derives rates on access.
class PRCurve {
 public:
  PRCurve(std::uint64_t positives, std::uint64_t negatives)
      : positives_(positives), negatives_(negatives) {}

  void push(const SweepStep& step) { steps_.push_back(step); }

  std::size_t size() const noexcept { return steps_.size(); }
  std::uint64_t positives() const noexcept { return positives_; }
  std::uint64_t negatives() const noexcept { return negatives_; }
  const std::vector<SweepStep>& steps() const noexcept { return steps_; }

  CurvePoint point(std::size_t i) const {
    const SweepStep& s = steps_[i];
    CurvePoint p;
    p.threshold = s.threshold;
    const std::uint64_t predicted = s.tp + s.fp;
    p.precision = predicted == 0 ? 0.0
                                 : static_cast<double>(s.tp) /
                                       static_cast<double>(predicted);
    p.recall = static_cast<double>(s.tp) / static_cast<double>(positives_);
    p.tpr = p.recall;
    p.fpr = negatives_ == 0 ? 0.0
                            : static_cast<double>(s.fp) /
                                  static_cast<double>(negatives_);
    return p;
  }

 private:
  std::uint64_t positives_;
  std::uint64_t negatives_;
  std::vector<SweepStep> steps_;
};

inline PRCurve pr_curve(PixelPool& pool, const ScoreMode& mode = {}) {
  PRCurve curve(pool.positive_count(), pool.negative_count());
  sweep(pool, mode, [&](const SweepStep& step) { curve.push(step); });
  return curve;
}

struct PixelReport {
  double auprc = 0.0;
  double fpr95 = 1.0;
  double f1_star = 0.0;
  double delta_star = 0.0;
  std::uint64_t positives = 0;
  std::uint64_t negatives = 0;

  friend bool operator==(const PixelReport&, const PixelReport&) = default;
};

// Single-pass accumulator for all pixel metrics; fed by a descending sweep.
class PixelMetricsAccumulator {
 public:
  PixelMetricsAccumulator(std::uint64_t positives, std::uint64_t negatives,
                          double tpr_target = 0.95)
      : positives_(positives), negatives_(negatives), target_(tpr_target) {}

  void operator()(const SweepStep& step) {
    const double p = static_cast<double>(positives_);
    if (step.tp > prev_tp_) {
      const double precision =
          static_cast<double>(step.tp) / static_cast<double>(step.tp + step.fp);
      auprc_ += precision * static_cast<double>(step.tp - prev_tp_) / p;
    }
    prev_tp_ = step.tp;

    if (!fpr_found_ &&
        static_cast<double>(step.tp) / p >= target_ - 1e-12) {
      fpr_found_ = true;
      fpr_ = negatives_ == 0 ? 0.0
                             : static_cast<double>(step.fp) /
                                   static_cast<double>(negatives_);
    }

    // F1 = 2tp / (2tp + fp + fn) = 2tp / (tp + fp + P). Thresholds with no
    // true positive have precision + recall = 0 and are skipped. Strictly
    // greater keeps the earliest, i.e. largest, threshold on ties.
    if (step.tp > 0) {
      const std::uint64_t denom = step.tp + step.fp + positives_;
      if (!best_found_ ||
          static_cast<unsigned __int128>(step.tp) * best_denom_ >
              static_cast<unsigned __int128>(best_tp_) * denom) {
        best_found_ = true;
        best_tp_ = step.tp;
        best_denom_ = denom;
        delta_star_ = step.threshold;
      }
    }
  }

  PixelReport report() const {
    PixelReport r;
    r.auprc = auprc_;
    r.fpr95 = fpr_;
    r.f1_star = best_found_ ? 2.0 * static_cast<double>(best_tp_) /
                                  static_cast<double>(best_denom_)
                            : 0.0;
    r.delta_star = delta_star_;
    r.positives = positives_;
    r.negatives = negatives_;
    return r;
  }

 private:
  std::uint64_t positives_;
  std::uint64_t negatives_;
  double target_;
  std::uint64_t prev_tp_ = 0;
  double auprc_ = 0.0;
  bool fpr_found_ = false;
  double fpr_ = 1.0;
  bool best_found_ = false;
  std::uint64_t best_tp_ = 0;
  std::uint64_t best_denom_ = 1;
  double delta_star_ = 0.0;
};

// Average precision: sum of precision times recall increment over the
// descending sweep, starting from recall 0.
inline double auprc(const PRCurve& curve) {
  PixelMetricsAccumulator acc(curve.positives(), curve.negatives());
  for (const auto& step : curve.steps()) acc(step);
  return acc.report().auprc;
}

// FPR at the largest threshold whose TPR reaches `target`. No interpolation.
inline double fpr_at_tpr(const PRCurve& curve, double target = 0.95) {
  if (curve.negatives() == 0) {
    throw Error(ErrorCode::kNoNegatives, "FPR needs non-anomaly pixels");
  }
  PixelMetricsAccumulator acc(curve.positives(), curve.negatives(), target);
  for (const auto& step : curve.steps()) acc(step);
  return acc.report().fpr95;
}

struct OptimalThreshold {
  double delta_star = 0.0;
  double f1_star = 0.0;
};

inline OptimalThreshold optimal_f1_threshold(const PRCurve& curve) {
  PixelMetricsAccumulator acc(curve.positives(), curve.negatives());
  for (const auto& step : curve.steps()) acc(step);
  const PixelReport r = acc.report();
  return {r.delta_star, r.f1_star};
}

// All pixel-level metrics in one sweep without materializing the curve.
inline PixelReport summarize(PixelPool& pool, const ScoreMode& mode = {}) {
  require_curve_preconditions(pool);
  PixelMetricsAccumulator acc(pool.positive_count(), pool.negative_count());
  sweep(pool, mode, acc);
  return acc.report();
}

inline PixelReport summarize(const PRCurve& curve) {
  PixelMetricsAccumulator acc(curve.positives(), curve.negatives());
  for (const auto& step : curve.steps()) acc(step);
  return acc.report();
}

}  // namespace anoseg
