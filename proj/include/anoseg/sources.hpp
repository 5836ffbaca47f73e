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

#include <concepts>
#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "anoseg/dataset_io.hpp"
#include "anoseg/domain.hpp"
#include "anoseg/synthgen.hpp"

namespace anoseg {

struct ImageInfo {
  std::string id;
  std::vector<std::string> tags;
};

// Inputs are loaded on demand, image by image, so a dataset never has to be
// resident in memory as a whole.
template <typename S>
concept ImageSource = requires(const S& s, std::size_t i) {
  { s.size() } -> std::convertible_to<std::size_t>;
  { s.info(i) } -> std::convertible_to<ImageInfo>;
  { s.labels(i) } -> std::convertible_to<LabelMap>;
};

template <typename S>
concept ScoreSource = ImageSource<S> && requires(const S& s, std::size_t i) {
  { s.scores(i) } -> std::convertible_to<ScoreMap>;
};

template <typename S>
concept MaskSource = ImageSource<S> && requires(const S& s, std::size_t i) {
  { s.mask(i) } -> std::convertible_to<BinaryMask>;
};

class InMemoryScores {
 public:
  InMemoryScores() = default;
  explicit InMemoryScores(std::vector<std::pair<LabelMap, ScoreMap>> pairs) {
    for (auto& p : pairs) add(std::to_string(pairs_.size()), std::move(p.first),
                              std::move(p.second));
  }

  void add(std::string id, LabelMap labels, ScoreMap scores,
           std::vector<std::string> tags = {}) {
    infos_.push_back({std::move(id), std::move(tags)});
    pairs_.emplace_back(std::move(labels), std::move(scores));
  }

  std::size_t size() const { return pairs_.size(); }
  const ImageInfo& info(std::size_t i) const { return infos_[i]; }
  const LabelMap& labels(std::size_t i) const { return pairs_[i].first; }
  const ScoreMap& scores(std::size_t i) const { return pairs_[i].second; }
  const std::vector<std::pair<LabelMap, ScoreMap>>& pairs() const {
    return pairs_;
  }

 private:
  std::vector<ImageInfo> infos_;
  std::vector<std::pair<LabelMap, ScoreMap>> pairs_;
};

class InMemoryMasks {
 public:
  void add(std::string id, LabelMap labels, BinaryMask mask,
           std::vector<std::string> tags = {}) {
    infos_.push_back({std::move(id), std::move(tags)});
    labels_.push_back(std::move(labels));
    masks_.push_back(std::move(mask));
  }

  std::size_t size() const { return labels_.size(); }
  const ImageInfo& info(std::size_t i) const { return infos_[i]; }
  const LabelMap& labels(std::size_t i) const { return labels_[i]; }
  const BinaryMask& mask(std::size_t i) const { return masks_[i]; }

 private:
  std::vector<ImageInfo> infos_;
  std::vector<LabelMap> labels_;
  std::vector<BinaryMask> masks_;
};

// Manifest-described dataset with score files in `dir`.
class FileScores {
 public:
  FileScores(DatasetManifest manifest, std::filesystem::path dir)
      : manifest_(std::move(manifest)), dir_(std::move(dir)) {}

  std::size_t size() const { return manifest_.images.size(); }
  ImageInfo info(std::size_t i) const {
    return {manifest_.images[i].id, manifest_.images[i].tags};
  }
  LabelMap labels(std::size_t i) const {
    LabelMap l = load_label_map(manifest_.label_path(i), manifest_.remap);
    check_entry_shape(manifest_.images[i], l.width(), l.height(), "label");
    return l;
  }
  ScoreMap scores(std::size_t i) const {
    const auto& entry = manifest_.images[i];
    const auto path = find_score_file(dir_, entry.id);
    if (!path) {
      throw Error(ErrorCode::kIoError, "missing score file for " + entry.id);
    }
    ScoreMap s = load_score_map(*path);
    check_entry_shape(entry, s.width(), s.height(), "score map");
    return s;
  }
  const DatasetManifest& manifest() const { return manifest_; }

 private:
  DatasetManifest manifest_;
  std::filesystem::path dir_;
};

// Manifest-described dataset with competitor masks `<id>.png` in `dir`.
class FileMasks {
 public:
  FileMasks(DatasetManifest manifest, std::filesystem::path dir)
      : manifest_(std::move(manifest)), dir_(std::move(dir)) {
    if (const auto unknown = unknown_mask_ids(manifest_, dir_);
        !unknown.empty()) {
      throw Error(ErrorCode::kUnknownImage,
                  "mask without manifest entry: " + unknown.front());
    }
  }

  std::size_t size() const { return manifest_.images.size(); }
  ImageInfo info(std::size_t i) const {
    return {manifest_.images[i].id, manifest_.images[i].tags};
  }
  LabelMap labels(std::size_t i) const {
    LabelMap l = load_label_map(manifest_.label_path(i), manifest_.remap);
    check_entry_shape(manifest_.images[i], l.width(), l.height(), "label");
    return l;
  }
  BinaryMask mask(std::size_t i) const {
    const auto& entry = manifest_.images[i];
    const auto path = mask_file(dir_, entry.id);
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorCode::kIoError, "missing mask for " + entry.id);
    }
    BinaryMask m = load_mask(path);
    check_entry_shape(entry, m.width(), m.height(), "mask");
    return m;
  }

 private:
  DatasetManifest manifest_;
  std::filesystem::path dir_;
};

// Scenes regenerated from their specs on every access.
class SyntheticScores {
 public:
  explicit SyntheticScores(std::vector<synth::SceneSpec> specs)
      : specs_(std::move(specs)) {}

  std::size_t size() const { return specs_.size(); }
  ImageInfo info(std::size_t i) const { return {"synth_" + std::to_string(i), {}}; }
  LabelMap labels(std::size_t i) const {
    return synth::generate_scene(specs_[i]).labels;
  }
  ScoreMap scores(std::size_t i) const {
    return synth::generate_scene(specs_[i]).scores;
  }
  // Both maps from a single generation.
  std::pair<LabelMap, ScoreMap> pair(std::size_t i) const {
    auto scene = synth::generate_scene(specs_[i]);
    return {std::move(scene.labels), std::move(scene.scores)};
  }

 private:
  std::vector<synth::SceneSpec> specs_;
};

// Labels and scores of image i, from one call when the source offers it.
template <ScoreSource S>
std::pair<LabelMap, ScoreMap> load_pair(const S& source, std::size_t i) {
  if constexpr (requires { source.pair(i); }) {
    return source.pair(i);
  } else {
    return {source.labels(i), source.scores(i)};
  }
}

// A subset of another source's images, in the given order.
template <ImageSource S>
class SubsetSource {
 public:
  SubsetSource(const S& base, std::vector<std::size_t> indices)
      : base_(&base), indices_(std::move(indices)) {}

  std::size_t size() const { return indices_.size(); }
  decltype(auto) info(std::size_t i) const { return base_->info(indices_[i]); }
  decltype(auto) labels(std::size_t i) const {
    return base_->labels(indices_[i]);
  }
  decltype(auto) scores(std::size_t i) const
    requires ScoreSource<S>
  {
    return base_->scores(indices_[i]);
  }
  decltype(auto) mask(std::size_t i) const
    requires MaskSource<S>
  {
    return base_->mask(indices_[i]);
  }
  std::pair<LabelMap, ScoreMap> pair(std::size_t i) const
    requires ScoreSource<S>
  {
    return load_pair(*base_, indices_[i]);
  }

 private:
  const S* base_;
  std::vector<std::size_t> indices_;
};

}  // namespace anoseg
