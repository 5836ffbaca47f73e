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
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "anoseg/component_eval.hpp"
#include "anoseg/connectivity.hpp"
#include "anoseg/domain.hpp"
#include "anoseg/mask_gen.hpp"
#include "anoseg/parallel.hpp"
#include "anoseg/pixel_eval.hpp"
#include "anoseg/sources.hpp"

namespace anoseg {

inline constexpr int kSchemaVersion = 1;

struct SweepPoint {
  double delta = 0.0;
  double f1_bar = 0.0;
  bool is_delta_star = false;

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

struct SubsetReport {
  std::size_t image_count = 0;
  std::optional<PixelReport> pixel;
  ComponentReport component;

  friend bool operator==(const SubsetReport&, const SubsetReport&) = default;
};

struct BenchmarkReport {
  std::string dataset;
  std::string method;
  TrackConfig config;
  std::size_t image_count = 0;
  // Absent when the run was fed competitor masks.
  std::optional<PixelReport> pixel;
  ComponentReport component;
  std::size_t void_pixels_cleared = 0;
  std::map<std::string, SubsetReport> subsets;
  std::vector<SizeBin> size_bins;
  std::vector<SweepPoint> delta_sweep;
  std::vector<std::string> warnings;

  friend bool operator==(const BenchmarkReport&,
                         const BenchmarkReport&) = default;
};

struct EvalOptions {
  std::string dataset = "dataset";
  std::string method = "method";
  std::size_t threads = 1;
  std::size_t size_bins = 8;
};

// Pools every non-void pixel of the source in image order.
template <ScoreSource S>
PixelPool pool_source(const S& source, std::size_t threads) {
  PixelPool pool;
  for_each_ordered(
      source.size(), threads,
      [&](std::size_t i) {
        const auto [labels, scores] = load_pair(source, i);
        PixelPool image;
        image.add(labels, scores);
        return image;
      },
      [&](std::size_t, PixelPool image) { pool.merge(image); });
  if (pool.positive_count() == 0) {
    throw Error(ErrorCode::kNoPositives,
                "no anomaly pixels after void exclusion");
  }
  return pool;
}

// Default segmentation at `delta` followed by component scoring.
template <ScoreSource S>
ComponentScores score_at_threshold(const S& source, double delta,
                                   const TrackConfig& config,
                                   std::size_t threads) {
  ComponentAccumulator acc;
  for_each_ordered(
      source.size(), threads,
      [&](std::size_t i) {
        const auto [labels, scores] = load_pair(source, i);
        validate_pair(labels, scores);
        const ComponentSet gt = extract_components(labels);
        const ComponentSet pred =
            predict_components(labels, scores, delta, config);
        return score_image(gt, pred, i);
      },
      [&](std::size_t, ComponentScores s) { acc.add(s); });
  return acc.scores();
}

inline ComponentReport component_report(const ComponentScores& scores,
                                        const TrackConfig& config) {
  ComponentAccumulator acc;
  acc.add(scores);
  return acc.report(config.tau_grid);
}

inline std::vector<SizeBin> size_bins_or_empty(const ComponentScores& scores,
                                               std::size_t bins) {
  if (bins == 0 || scores.per_gt.size() < bins) return {};
  return size_stratified(scores, bins);
}

// Scores → pooled PR sweep → δ* → default masks → component metrics.
template <ScoreSource S>
BenchmarkReport evaluate(const S& source, const TrackConfig& config,
                         const EvalOptions& options = {}) {
  config.validate();
  BenchmarkReport report;
  report.dataset = options.dataset;
  report.method = options.method;
  report.config = config;
  report.image_count = source.size();

  PixelPool pool = pool_source(source, options.threads);
  const PixelReport pixel = summarize(pool, config.score_mode);
  pool = PixelPool{};
  report.pixel = pixel;

  const ComponentScores scores =
      score_at_threshold(source, pixel.delta_star, config, options.threads);
  report.component = component_report(scores, config);
  report.size_bins = size_bins_or_empty(scores, options.size_bins);
  return report;
}

// Competitor masks: no pixel section, components straight from the masks
// after void pixels are cleared.
template <MaskSource S>
BenchmarkReport evaluate_masks(const S& source, const TrackConfig& config,
                               const EvalOptions& options = {}) {
  config.validate();
  BenchmarkReport report;
  report.dataset = options.dataset;
  report.method = options.method;
  report.config = config;
  report.config.filtering = false;
  report.image_count = source.size();

  struct ImageResult {
    ComponentScores scores;
    std::size_t cleared = 0;
  };
  ComponentAccumulator acc;
  for_each_ordered(
      source.size(), options.threads,
      [&](std::size_t i) {
        const LabelMap labels = source.labels(i);
        const auto [mask, cleared] = clear_void(labels, source.mask(i));
        return ImageResult{
            score_image(extract_components(labels), extract_components(mask),
                        i),
            cleared};
      },
      [&](std::size_t, ImageResult r) {
        acc.add(r.scores);
        report.void_pixels_cleared += r.cleared;
      });
  report.component = acc.report(config.tau_grid);
  report.size_bins = size_bins_or_empty(acc.scores(), options.size_bins);
  if (report.void_pixels_cleared > 0) {
    report.warnings.push_back(std::to_string(report.void_pixels_cleared) +
                              " predicted pixels on void were cleared");
  }
  return report;
}

// Group keys of an image for a tag kind. Tags of kind K are written "K:value";
// the empty kind selects bare tags without a colon.
inline std::vector<std::string> group_keys(const std::vector<std::string>& tags,
                                           const std::string& kind) {
  std::set<std::string> keys;
  for (const auto& tag : tags) {
    const auto colon = tag.find(':');
    if (kind.empty()) {
      if (colon == std::string::npos) keys.insert(tag);
    } else if (colon != std::string::npos && tag.substr(0, colon) == kind) {
      keys.insert(tag.substr(colon + 1));
    }
  }
  if (keys.empty()) keys.insert("untagged");
  return {keys.begin(), keys.end()};
}

// Image indices per group. With `exclusive`, images that fall into more than
// one group are left out entirely.
template <ImageSource S>
std::map<std::string, std::vector<std::size_t>> partition_by_tag(
    const S& source, const std::string& kind, bool exclusive = false) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < source.size(); ++i) {
    const ImageInfo info = source.info(i);
    const auto keys = group_keys(info.tags, kind);
    if (exclusive && keys.size() > 1) continue;
    for (const auto& k : keys) groups[k].push_back(i);
  }
  return groups;
}

// Independent benchmark run per tag group; δ* is recomputed inside each.
// Groups that cannot be evaluated are skipped and reported in `warnings`.
template <typename S>
std::map<std::string, SubsetReport> evaluate_subsets(
    const S& source, const TrackConfig& config, const std::string& kind,
    const EvalOptions& options, std::vector<std::string>* warnings = nullptr,
    bool exclusive = false) {
  std::map<std::string, SubsetReport> out;
  for (auto& [key, indices] : partition_by_tag(source, kind, exclusive)) {
    const std::size_t n = indices.size();
    SubsetSource<S> subset(source, std::move(indices));
    EvalOptions sub = options;
    sub.size_bins = 0;
    try {
      BenchmarkReport r;
      if constexpr (ScoreSource<S>) {
        r = evaluate(subset, config, sub);
      } else {
        r = evaluate_masks(subset, config, sub);
      }
      out[key] = SubsetReport{n, r.pixel, r.component};
    } catch (const Error& e) {
      if (warnings) warnings->push_back("subset '" + key + "' skipped: " + e.what());
    }
  }
  return out;
}

// Evenly spaced quantiles (0, 1/(count-1), ..., 1) of the pooled scores.
inline std::vector<double> pooled_quantiles(PixelPool& pool, std::size_t count) {
  pool.sort();
  const auto pos = pool.positives();
  const auto neg = pool.negatives();
  const std::size_t n = pos.size() + neg.size();
  if (n == 0 || count == 0) return {};
  // Wanted positions in the descending merged order.
  std::vector<std::size_t> wanted;
  for (std::size_t j = 0; j < count; ++j) {
    const double q = count == 1 ? 0.5
                                : static_cast<double>(j) /
                                      static_cast<double>(count - 1);
    const auto ascending = static_cast<std::size_t>(
        std::llround(q * static_cast<double>(n - 1)));
    wanted.push_back(n - 1 - ascending);
  }
  std::vector<std::size_t> order(wanted);
  std::sort(order.begin(), order.end());
  std::map<std::size_t, double> value_at;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t next = 0;
  for (std::size_t rank = 0; rank < n && next < order.size(); ++rank) {
    float v;
    if (j == neg.size() || (i < pos.size() && pos[i] >= neg[j])) {
      v = pos[i++];
    } else {
      v = neg[j++];
    }
    while (next < order.size() && order[next] == rank) {
      value_at[rank] = v;
      ++next;
    }
  }
  std::vector<double> out;
  for (const auto w : wanted) out.push_back(value_at[w]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct DeltaSweep {
  double delta_star = 0.0;
  std::vector<SweepPoint> points;
};

// F̄1 of the default segmentation for every δ in `grid` (default: 50 pooled
// quantiles). δ* is always included and flagged.
template <ScoreSource S>
DeltaSweep delta_sweep(const S& source, const TrackConfig& config,
                       std::optional<std::vector<double>> grid = std::nullopt,
                       std::size_t threads = 1, std::size_t quantiles = 50) {
  config.validate();
  PixelPool pool = pool_source(source, threads);
  const PixelReport pixel = summarize(pool, config.score_mode);
  std::vector<double> deltas =
      grid ? *grid : pooled_quantiles(pool, quantiles);
  pool = PixelPool{};
  deltas.push_back(pixel.delta_star);
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());

  std::vector<ComponentAccumulator> accs(deltas.size());
  for_each_ordered(
      source.size(), threads,
      [&](std::size_t i) {
        const auto [labels, scores] = load_pair(source, i);
        validate_pair(labels, scores);
        const ComponentSet gt = extract_components(labels);
        std::vector<ComponentScores> per_delta;
        per_delta.reserve(deltas.size());
        for (const double d : deltas) {
          per_delta.push_back(
              score_image(gt, predict_components(labels, scores, d, config), i));
        }
        return per_delta;
      },
      [&](std::size_t, std::vector<ComponentScores> per_delta) {
        for (std::size_t k = 0; k < deltas.size(); ++k) accs[k].add(per_delta[k]);
      });

  DeltaSweep out;
  out.delta_star = pixel.delta_star;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const ComponentReport r = accs[k].report(config.tau_grid);
    out.points.push_back({deltas[k], r.f1_bar, deltas[k] == pixel.delta_star});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization.

using Json = nlohmann::ordered_json;

inline std::string score_mode_name(const ScoreMode& mode) {
  return mode.is_exact() ? "exact" : "binned";
}

inline Json to_json(const PixelReport& p) {
  return Json{{"auprc", p.auprc},
              {"fpr95", p.fpr95},
              {"f1_star", p.f1_star},
              {"delta_star", p.delta_star},
              {"positives", p.positives},
              {"negatives", p.negatives}};
}

inline PixelReport pixel_from_json(const Json& j) {
  PixelReport p;
  p.auprc = j.at("auprc").get<double>();
  p.fpr95 = j.at("fpr95").get<double>();
  p.f1_star = j.at("f1_star").get<double>();
  p.delta_star = j.at("delta_star").get<double>();
  p.positives = j.at("positives").get<std::uint64_t>();
  p.negatives = j.at("negatives").get<std::uint64_t>();
  return p;
}

inline Json to_json(const ComponentReport& c) {
  Json per_tau = Json::array();
  for (const auto& t : c.per_tau) {
    per_tau.push_back({{"tau", t.tau},
                       {"tp", t.tp},
                       {"fn", t.fn},
                       {"fp", t.fp},
                       {"f1", t.f1}});
  }
  return Json{{"mean_siou", c.mean_siou},
              {"mean_ppv", c.mean_ppv},
              {"no_predictions", c.no_predictions},
              {"gt_components", c.gt_components},
              {"pred_components", c.pred_components},
              {"per_tau", per_tau},
              {"f1_bar", c.f1_bar}};
}

inline ComponentReport component_from_json(const Json& j) {
  ComponentReport c;
  c.mean_siou = j.at("mean_siou").get<double>();
  c.mean_ppv = j.at("mean_ppv").get<double>();
  c.no_predictions = j.at("no_predictions").get<bool>();
  c.gt_components = j.at("gt_components").get<std::uint64_t>();
  c.pred_components = j.at("pred_components").get<std::uint64_t>();
  for (const auto& t : j.at("per_tau")) {
    c.per_tau.push_back({t.at("tau").get<double>(), t.at("tp").get<std::uint64_t>(),
                         t.at("fn").get<std::uint64_t>(),
                         t.at("fp").get<std::uint64_t>(), t.at("f1").get<double>()});
  }
  c.f1_bar = j.at("f1_bar").get<double>();
  return c;
}

inline Json to_json(const BenchmarkReport& r) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dataset"] = r.dataset;
  doc["method"] = r.method;
  doc["config"] = {{"track", std::string(to_string(r.config.track))},
                   {"min_size", r.config.min_component_size},
                   {"filtering", r.config.filtering},
                   {"clip_void", r.config.clip_void},
                   {"score_mode", score_mode_name(r.config.score_mode)},
                   {"bins", r.config.score_mode.bin_count},
                   {"tau_grid", r.config.tau_grid}};
  doc["image_count"] = r.image_count;
  doc["pixel"] = r.pixel ? to_json(*r.pixel) : Json(nullptr);
  doc["component"] = to_json(r.component);
  doc["void_pixels_cleared"] = r.void_pixels_cleared;
  Json subsets = Json::object();
  for (const auto& [key, s] : r.subsets) {
    subsets[key] = {{"image_count", s.image_count},
                    {"pixel", s.pixel ? to_json(*s.pixel) : Json(nullptr)},
                    {"component", to_json(s.component)}};
  }
  doc["subsets"] = subsets;
  Json bins = Json::array();
  for (const auto& b : r.size_bins) {
    bins.push_back({{"count", b.count},
                    {"min_size", b.min_size},
                    {"max_size", b.max_size},
                    {"mean_siou", b.mean_siou},
                    {"fn_ratio", b.fn_ratio}});
  }
  doc["size_bins"] = bins;
  Json sweep = Json::array();
  for (const auto& p : r.delta_sweep) {
    sweep.push_back({{"delta", p.delta},
                     {"f1_bar", p.f1_bar},
                     {"is_delta_star", p.is_delta_star}});
  }
  doc["delta_sweep"] = sweep;
  doc["warnings"] = r.warnings;
  return doc;
}

inline BenchmarkReport report_from_json(const Json& doc) {
  try {
    BenchmarkReport r;
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      throw Error(ErrorCode::kBadManifest, "unsupported schema version");
    }
    r.dataset = doc.at("dataset").get<std::string>();
    r.method = doc.at("method").get<std::string>();
    const Json& cfg = doc.at("config");
    r.config.track = parse_track(cfg.at("track").get<std::string>());
    r.config.min_component_size = cfg.at("min_size").get<std::size_t>();
    r.config.filtering = cfg.at("filtering").get<bool>();
    r.config.clip_void = cfg.at("clip_void").get<bool>();
    r.config.score_mode.kind = cfg.at("score_mode").get<std::string>() == "exact"
                                   ? ScoreMode::Kind::kExact
                                   : ScoreMode::Kind::kBinned;
    r.config.score_mode.bin_count = cfg.at("bins").get<std::size_t>();
    r.config.tau_grid = cfg.at("tau_grid").get<std::vector<double>>();
    r.image_count = doc.at("image_count").get<std::size_t>();
    if (!doc.at("pixel").is_null()) r.pixel = pixel_from_json(doc.at("pixel"));
    r.component = component_from_json(doc.at("component"));
    r.void_pixels_cleared = doc.at("void_pixels_cleared").get<std::size_t>();
    for (const auto& [key, s] : doc.at("subsets").items()) {
      SubsetReport sub;
      sub.image_count = s.at("image_count").get<std::size_t>();
      if (!s.at("pixel").is_null()) sub.pixel = pixel_from_json(s.at("pixel"));
      sub.component = component_from_json(s.at("component"));
      r.subsets[key] = sub;
    }
    for (const auto& b : doc.at("size_bins")) {
      r.size_bins.push_back({b.at("count").get<std::size_t>(),
                             b.at("min_size").get<std::size_t>(),
                             b.at("max_size").get<std::size_t>(),
                             b.at("mean_siou").get<double>(),
                             b.at("fn_ratio").get<double>()});
    }
    for (const auto& p : doc.at("delta_sweep")) {
      r.delta_sweep.push_back({p.at("delta").get<double>(),
                               p.at("f1_bar").get<double>(),
                               p.at("is_delta_star").get<bool>()});
    }
    r.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadManifest, std::string("results: ") + e.what());
  }
}

namespace detail {

// Percentage with two decimals, rounded half-up.
inline std::string percent(double value) {
  const double scaled = std::floor(value * 10000.0 + 0.5 + 1e-9) / 100.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", scaled);
  return buf;
}

inline std::string full(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

inline const TauCounts* find_tau(const ComponentReport& c, double tau) {
  for (const auto& t : c.per_tau) {
    if (std::abs(t.tau - tau) < 1e-9) return &t;
  }
  return nullptr;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

// Leaderboard column order.
inline std::vector<std::string> table_columns() {
  return {"Method",  "AuPRC",   "FPR95",   "F1*",     "avg sIoU",
          "avg PPV", "FN@0.25", "FP@0.25", "F1@0.25", "FN@0.50",
          "FP@0.50", "F1@0.50", "FN@0.75", "FP@0.75", "F1@0.75",
          "avg F1"};
}

inline std::vector<std::string> table_row(const std::string& name,
                                          const std::optional<PixelReport>& p,
                                          const ComponentReport& c) {
  std::vector<std::string> row{name};
  for (const double v : {p ? p->auprc : -1.0, p ? p->fpr95 : -1.0,
                         p ? p->f1_star : -1.0}) {
    row.push_back(p ? detail::percent(v) : "-");
  }
  row.push_back(detail::percent(c.mean_siou));
  row.push_back(c.no_predictions ? "-" : detail::percent(c.mean_ppv));
  for (const double tau : {0.25, 0.50, 0.75}) {
    if (const TauCounts* t = detail::find_tau(c, tau)) {
      row.push_back(std::to_string(t->fn));
      row.push_back(std::to_string(t->fp));
      row.push_back(detail::percent(t->f1));
    } else {
      row.insert(row.end(), {"-", "-", "-"});
    }
  }
  row.push_back(detail::percent(c.f1_bar));
  return row;
}

inline std::string format_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << "  ";
      if (i == 0) {
        out << row[i] << std::string(widths[i] - row[i].size(), ' ');
      } else {
        out << std::string(widths[i] - row[i].size(), ' ') << row[i];
      }
    }
    out << '\n';
  }
  return out.str();
}

enum class Format { kJson, kTable, kCsv };

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::kJson;
  if (s == "table") return Format::kTable;
  if (s == "csv") return Format::kCsv;
  throw Error(ErrorCode::kInvalidConfig, "unknown format '" + s + "'");
}

inline std::string emit_csv(const BenchmarkReport& r) {
  std::ostringstream out;
  out << "dataset,method,auprc,fpr95,f1_star,delta_star,mean_siou,mean_ppv,"
         "gt_components,pred_components";
  for (const auto& t : r.component.per_tau) {
    const std::string s = detail::full(t.tau);
    out << ",tp@" << s << ",fn@" << s << ",fp@" << s << ",f1@" << s;
  }
  out << ",f1_bar\n";
  out << detail::csv_field(r.dataset) << ',' << detail::csv_field(r.method);
  if (r.pixel) {
    out << ',' << detail::full(r.pixel->auprc) << ','
        << detail::full(r.pixel->fpr95) << ',' << detail::full(r.pixel->f1_star)
        << ',' << detail::full(r.pixel->delta_star);
  } else {
    out << ",,,,";
  }
  out << ',' << detail::full(r.component.mean_siou) << ','
      << detail::full(r.component.mean_ppv) << ',' << r.component.gt_components
      << ',' << r.component.pred_components;
  for (const auto& t : r.component.per_tau) {
    out << ',' << t.tp << ',' << t.fn << ',' << t.fp << ','
        << detail::full(t.f1);
  }
  out << ',' << detail::full(r.component.f1_bar) << '\n';
  return out.str();
}

inline std::string emit(const BenchmarkReport& r, Format format) {
  switch (format) {
    case Format::kJson:
      return to_json(r).dump(2) + "\n";
    case Format::kCsv:
      return emit_csv(r);
    case Format::kTable: {
      std::vector<std::vector<std::string>> rows{table_columns()};
      rows.push_back(table_row(r.method, r.pixel, r.component));
      for (const auto& [key, s] : r.subsets) {
        rows.push_back(table_row(r.method + " [" + key + "]", s.pixel, s.component));
      }
      std::string out = r.dataset + " (" + std::to_string(r.component.gt_components) +
                        " ground-truth components)\n" + format_table(rows);
      if (!r.size_bins.empty()) {
        out += "\nsize bins (ground-truth components sorted by size)\n";
        std::vector<std::vector<std::string>> bins{
            {"bin", "count", "min px", "max px", "avg sIoU", "FN ratio"}};
        for (std::size_t i = 0; i < r.size_bins.size(); ++i) {
          const auto& b = r.size_bins[i];
          bins.push_back({std::to_string(i + 1), std::to_string(b.count),
                          std::to_string(b.min_size), std::to_string(b.max_size),
                          detail::percent(b.mean_siou),
                          detail::percent(b.fn_ratio)});
        }
        out += format_table(bins);
      }
      return out;
    }
  }
  return {};
}

inline std::string emit_sweep_csv(const DeltaSweep& sweep) {
  std::ostringstream out;
  out << "delta,f1_bar,is_delta_star\n";
  for (const auto& p : sweep.points) {
    out << detail::full(p.delta) << ',' << detail::full(p.f1_bar) << ','
        << (p.is_delta_star ? 1 : 0) << '\n';
  }
  return out.str();
}

inline Json to_json(const DatasetStats& s) {
  return Json{{"image_count", s.image_count},
              {"anomaly_pixel_fraction", s.anomaly_pixel_fraction},
              {"not_anomaly_pixel_fraction", s.not_anomaly_pixel_fraction},
              {"gt_component_count", s.gt_component_count},
              {"mean_relative_size", s.mean_relative_size},
              {"std_relative_size", s.std_relative_size}};
}

}  // namespace anoseg
