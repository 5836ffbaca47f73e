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
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "anoseg/connectivity.hpp"
#include "anoseg/domain.hpp"
#include "anoseg/mask_gen.hpp"
#include "anoseg/png_io.hpp"

namespace anoseg {

namespace fs = std::filesystem;

// Pixel value -> ground-truth class. Unmapped values are encoding errors.
class LabelRemap {
 public:
  // 0 -> NotAnomaly, 1 -> Anomaly, 255 -> Void.
  static LabelRemap standard() {
    LabelRemap r;
    r.set(0, Label::kNotAnomaly);
    r.set(1, Label::kAnomaly);
    r.set(255, Label::kVoid);
    return r;
  }

  void set(std::uint8_t value, Label label) { table_[value] = label; }
  std::optional<Label> lookup(std::uint16_t value) const {
    if (value > 255) return std::nullopt;
    return table_[value];
  }
  bool is_standard() const { return *this == standard(); }

  friend bool operator==(const LabelRemap&, const LabelRemap&) = default;

 private:
  std::array<std::optional<Label>, 256> table_{};
};

inline std::uint8_t standard_code(Label label) {
  switch (label) {
    case Label::kNotAnomaly: return 0;
    case Label::kAnomaly: return 1;
    case Label::kVoid: return 255;
  }
  return 255;
}

inline Label parse_label_name(const std::string& name) {
  if (name == "not_anomaly" || name == "not_obstacle") return Label::kNotAnomaly;
  if (name == "anomaly" || name == "obstacle") return Label::kAnomaly;
  if (name == "void") return Label::kVoid;
  throw Error(ErrorCode::kBadManifest, "unknown class name '" + name + "'");
}

struct ImageEntry {
  std::string id;
  std::string label;  // Path relative to the manifest directory.
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::string> tags;

  friend bool operator==(const ImageEntry&, const ImageEntry&) = default;
};

struct DatasetManifest {
  std::string name;
  Track track = Track::kAnomaly;
  std::vector<ImageEntry> images;
  LabelRemap remap = LabelRemap::standard();
  fs::path base_dir;

  fs::path label_path(std::size_t i) const { return base_dir / images[i].label; }

  std::optional<std::size_t> find(const std::string& id) const {
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (images[i].id == id) return i;
    }
    return std::nullopt;
  }
};

inline DatasetManifest parse_manifest(const nlohmann::json& doc,
                                      const fs::path& base_dir,
                                      bool check_files = true) {
  DatasetManifest m;
  m.base_dir = base_dir;
  try {
    m.name = doc.at("name").get<std::string>();
    m.track = parse_track(doc.at("track").get<std::string>());
    if (doc.contains("remap")) {
      LabelRemap remap;
      for (const auto& [value, name] : doc.at("remap").items()) {
        const int v = std::stoi(value);
        if (v < 0 || v > 255) {
          throw Error(ErrorCode::kBadManifest, "remap value out of range");
        }
        remap.set(static_cast<std::uint8_t>(v),
                  parse_label_name(name.get<std::string>()));
      }
      m.remap = remap;
    }
    std::set<std::string> ids;
    for (const auto& item : doc.at("images")) {
      ImageEntry e;
      e.id = item.at("id").get<std::string>();
      e.label = item.at("label").get<std::string>();
      e.width = item.at("width").get<std::size_t>();
      e.height = item.at("height").get<std::size_t>();
      if (item.contains("tags")) {
        e.tags = item.at("tags").get<std::vector<std::string>>();
      }
      if (!ids.insert(e.id).second) {
        throw Error(ErrorCode::kBadManifest, "duplicate image id " + e.id);
      }
      if (e.width == 0 || e.height == 0) {
        throw Error(ErrorCode::kBadManifest, "empty image " + e.id);
      }
      m.images.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadManifest, e.what());
  }
  if (check_files) {
    for (std::size_t i = 0; i < m.images.size(); ++i) {
      if (!fs::exists(m.label_path(i))) {
        throw Error(ErrorCode::kIoError,
                    "missing label file " + m.label_path(i).string());
      }
    }
  }
  return m;
}

inline DatasetManifest load_manifest(const fs::path& path,
                                     bool check_files = true) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBadManifest, path.string() + ": " + e.what());
  }
  return parse_manifest(doc, path.parent_path(), check_files);
}

inline nlohmann::ordered_json manifest_to_json(const DatasetManifest& m) {
  nlohmann::ordered_json doc;
  doc["name"] = m.name;
  doc["track"] = std::string(to_string(m.track));
  if (!m.remap.is_standard()) {
    nlohmann::ordered_json remap = nlohmann::ordered_json::object();
    for (int v = 0; v < 256; ++v) {
      const auto label = m.remap.lookup(static_cast<std::uint16_t>(v));
      if (!label) continue;
      remap[std::to_string(v)] = *label == Label::kAnomaly   ? "anomaly"
                                 : *label == Label::kVoid    ? "void"
                                                             : "not_anomaly";
    }
    doc["remap"] = remap;
  }
  doc["images"] = nlohmann::ordered_json::array();
  for (const auto& e : m.images) {
    doc["images"].push_back({{"id", e.id},
                             {"label", e.label},
                             {"width", e.width},
                             {"height", e.height},
                             {"tags", e.tags}});
  }
  return doc;
}

inline void save_manifest(const DatasetManifest& m, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << manifest_to_json(m).dump(2) << '\n';
}

// 8-bit grayscale PNG through `remap` (standard: 0/1/255).
inline LabelMap load_label_map(const fs::path& path,
                               const LabelRemap& remap = LabelRemap::standard()) {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Label> cells;
  png::read_gray(
      path,
      [&](const png::Header& h) {
        if (h.bit_depth != 8) {
          throw Error(ErrorCode::kUnsupportedFormat,
                      path.string() + ": labels must be 8-bit grayscale");
        }
        width = h.width;
        height = h.height;
        cells.reserve(width * height);
      },
      [&](std::size_t r, std::span<const std::uint16_t> row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          const auto label = remap.lookup(row[c]);
          if (!label) {
            throw Error(ErrorCode::kBadEncoding,
                        path.string() + ": value " + std::to_string(row[c]) +
                            " at (" + std::to_string(r) + ", " +
                            std::to_string(c) + ")");
          }
          cells.push_back(*label);
        }
      });
  return LabelMap(width, height, std::move(cells));
}

inline void write_label_map(const fs::path& path, const LabelMap& labels) {
  std::vector<std::uint16_t> samples(labels.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = standard_code(labels[i]);
  }
  png::write_gray(path, labels.width(), labels.height(), 8, samples);
}

inline fs::path header_path(const fs::path& raw) {
  fs::path p = raw;
  p.replace_extension(".hdr");
  return p;
}

// Raw little-endian float32 payload with a `width height` text header next
// to it, or a 16-bit grayscale PNG mapped linearly onto [0, 1].
inline ScoreMap load_score_map(const fs::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".png") {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<float> cells;
    png::read_gray(
        path,
        [&](const png::Header& h) {
          if (h.bit_depth != 16) {
            throw Error(ErrorCode::kUnsupportedFormat,
                        path.string() + ": score PNGs must be 16-bit");
          }
          width = h.width;
          height = h.height;
          cells.reserve(width * height);
        },
        [&](std::size_t, std::span<const std::uint16_t> row) {
          for (const auto v : row) {
            cells.push_back(static_cast<float>(v) / 65535.0f);
          }
        });
    return ScoreMap(width, height, std::move(cells));
  }
  if (ext != ".f32") {
    throw Error(ErrorCode::kUnsupportedFormat,
                path.string() + ": expected .f32 or .png");
  }
  std::ifstream hdr(header_path(path));
  if (!hdr) {
    throw Error(ErrorCode::kIoError,
                "missing header " + header_path(path).string());
  }
  std::size_t width = 0;
  std::size_t height = 0;
  if (!(hdr >> width >> height) || width == 0 || height == 0) {
    throw Error(ErrorCode::kHeaderMismatch,
                header_path(path).string() + ": expected 'width height'");
  }
  std::error_code ec;
  const auto bytes = fs::file_size(path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot stat " + path.string());
  if (bytes != width * height * 4) {
    throw Error(ErrorCode::kHeaderMismatch,
                path.string() + ": " + std::to_string(bytes) +
                    " bytes for " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<float> cells(width * height);
  in.read(reinterpret_cast<char*>(cells.data()),
          static_cast<std::streamsize>(bytes));
  if (!in) throw Error(ErrorCode::kIoError, "short read " + path.string());
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& v : cells) {
      v = std::bit_cast<float>(__builtin_bswap32(std::bit_cast<std::uint32_t>(v)));
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!std::isfinite(cells[i])) {
      throw Error(ErrorCode::kNonFiniteScore,
                  path.string() + ": pixel index " + std::to_string(i));
    }
  }
  return ScoreMap(width, height, std::move(cells));
}

inline void write_score_raw(const fs::path& path, const ScoreMap& scores) {
  {
    std::ofstream hdr(header_path(path));
    if (!hdr) {
      throw Error(ErrorCode::kIoError,
                  "cannot write " + header_path(path).string());
    }
    hdr << scores.width() << ' ' << scores.height() << '\n';
  }
  std::vector<float> cells(scores.cells().begin(), scores.cells().end());
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& v : cells) {
      v = std::bit_cast<float>(__builtin_bswap32(std::bit_cast<std::uint32_t>(v)));
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(cells.data()),
            static_cast<std::streamsize>(cells.size() * sizeof(float)));
}

// Scores are clamped to [0, 1] and quantized to 16 bits.
inline void write_score_png(const fs::path& path, const ScoreMap& scores) {
  std::vector<std::uint16_t> samples(scores.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = std::clamp(static_cast<double>(scores[i]), 0.0, 1.0);
    samples[i] = static_cast<std::uint16_t>(std::lround(v * 65535.0));
  }
  png::write_gray(path, scores.width(), scores.height(), 16, samples);
}

// 8-bit grayscale: 0 = not predicted, anything else = predicted.
inline BinaryMask load_mask(const fs::path& path) {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> cells;
  png::read_gray(
      path,
      [&](const png::Header& h) {
        if (h.bit_depth != 8) {
          throw Error(ErrorCode::kUnsupportedFormat,
                      path.string() + ": masks must be 8-bit grayscale");
        }
        width = h.width;
        height = h.height;
        cells.reserve(width * height);
      },
      [&](std::size_t, std::span<const std::uint16_t> row) {
        for (const auto v : row) cells.push_back(v != 0 ? 1 : 0);
      });
  return BinaryMask(width, height, std::move(cells));
}

inline void write_mask(const fs::path& path, const BinaryMask& mask) {
  std::vector<std::uint16_t> samples(mask.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = mask[i] ? 255 : 0;
  }
  png::write_gray(path, mask.width(), mask.height(), 8, samples);
}

// Score file for `id` in `dir`: `<id>.f32` (with `<id>.hdr`) or `<id>.png`.
inline std::optional<fs::path> find_score_file(const fs::path& dir,
                                               const std::string& id) {
  const fs::path raw = dir / (id + ".f32");
  if (fs::exists(raw)) return raw;
  const fs::path png16 = dir / (id + ".png");
  if (fs::exists(png16)) return png16;
  return std::nullopt;
}

inline fs::path mask_file(const fs::path& dir, const std::string& id) {
  return dir / (id + ".png");
}

inline void check_entry_shape(const ImageEntry& entry, std::size_t width,
                              std::size_t height, const std::string& what) {
  if (entry.width != width || entry.height != height) {
    throw Error(ErrorCode::kDimensionMismatch,
                entry.id + ": " + what + " is " + std::to_string(width) + "x" +
                    std::to_string(height) + ", manifest says " +
                    std::to_string(entry.width) + "x" +
                    std::to_string(entry.height));
  }
}

// Ids of PNG files in `dir` that the manifest does not list.
inline std::vector<std::string> unknown_mask_ids(const DatasetManifest& m,
                                                 const fs::path& dir) {
  std::vector<std::string> unknown;
  for (const auto& f : fs::directory_iterator(dir)) {
    if (!f.is_regular_file() || f.path().extension() != ".png") continue;
    const std::string id = f.path().stem().string();
    if (!m.find(id)) unknown.push_back(id);
  }
  std::sort(unknown.begin(), unknown.end());
  return unknown;
}

// Loads one competitor mask per manifest image verbatim; only predictions on
// void are cleared and counted.
inline MaskBundle masks_from_external(const DatasetManifest& m,
                                      const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIoError, "not a directory: " + dir.string());
  }
  if (const auto unknown = unknown_mask_ids(m, dir); !unknown.empty()) {
    throw Error(ErrorCode::kUnknownImage,
                "mask without manifest entry: " + unknown.front());
  }
  MaskBundle bundle;
  bundle.filtered = false;
  bundle.min_size_used = 0;
  bundle.delta_used = std::nan("");
  for (std::size_t i = 0; i < m.images.size(); ++i) {
    const auto& entry = m.images[i];
    const fs::path path = mask_file(dir, entry.id);
    if (!fs::exists(path)) {
      throw Error(ErrorCode::kIoError, "missing mask for " + entry.id);
    }
    const BinaryMask raw = load_mask(path);
    check_entry_shape(entry, raw.width(), raw.height(), "mask");
    const LabelMap labels = load_label_map(m.label_path(i), m.remap);
    auto [mask, cleared] = clear_void(labels, raw);
    bundle.void_pixels_cleared += cleared;
    bundle.masks.push_back(std::move(mask));
  }
  return bundle;
}

struct DatasetStats {
  double anomaly_pixel_fraction = 0.0;
  double not_anomaly_pixel_fraction = 0.0;
  std::size_t image_count = 0;
  std::size_t gt_component_count = 0;
  double mean_relative_size = 0.0;
  double std_relative_size = 0.0;

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

// Pooled pixel fractions and per-component relative sizes (component size
// over its image's pixel count). The std is the population std.
class DatasetStatsAccumulator {
 public:
  void add(const LabelMap& labels) {
    ++images_;
    total_ += labels.size();
    for (const auto l : labels.cells()) {
      if (l == Label::kAnomaly) ++anomaly_;
      if (l == Label::kNotAnomaly) ++not_anomaly_;
    }
    const ComponentSet set = extract_components(labels);
    for (const auto& c : set.components()) {
      relative_.push_back(static_cast<double>(c.size) /
                          static_cast<double>(labels.size()));
    }
  }

  DatasetStats stats() const {
    DatasetStats s;
    s.image_count = images_;
    s.gt_component_count = relative_.size();
    if (total_ > 0) {
      s.anomaly_pixel_fraction =
          static_cast<double>(anomaly_) / static_cast<double>(total_);
      s.not_anomaly_pixel_fraction =
          static_cast<double>(not_anomaly_) / static_cast<double>(total_);
    }
    if (!relative_.empty()) {
      double sum = 0.0;
      for (const double r : relative_) sum += r;
      s.mean_relative_size = sum / static_cast<double>(relative_.size());
      double sq = 0.0;
      for (const double r : relative_) {
        sq += (r - s.mean_relative_size) * (r - s.mean_relative_size);
      }
      s.std_relative_size = std::sqrt(sq / static_cast<double>(relative_.size()));
    }
    return s;
  }

 private:
  std::size_t images_ = 0;
  std::uint64_t total_ = 0;
  std::uint64_t anomaly_ = 0;
  std::uint64_t not_anomaly_ = 0;
  std::vector<double> relative_;
};

inline DatasetStats dataset_stats(const DatasetManifest& m) {
  DatasetStatsAccumulator acc;
  for (std::size_t i = 0; i < m.images.size(); ++i) {
    const LabelMap labels = load_label_map(m.label_path(i), m.remap);
    check_entry_shape(m.images[i], labels.width(), labels.height(), "label");
    acc.add(labels);
  }
  return acc.stats();
}

}  // namespace anoseg
