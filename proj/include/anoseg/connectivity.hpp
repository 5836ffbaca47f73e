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
#include <numeric>
#include <optional>
#include <vector>

#include "anoseg/domain.hpp"

namespace anoseg {

struct BoundingBox {
  std::size_t min_row = 0;
  std::size_t min_col = 0;
  std::size_t max_row = 0;
  std::size_t max_col = 0;

  bool contains(std::size_t row, std::size_t col) const noexcept {
    return row >= min_row && row <= max_row && col >= min_col &&
           col <= max_col;
  }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Component {
  std::uint32_t id = 0;
  std::size_t size = 0;
  BoundingBox bbox;
  // Raster index of the first pixel; components are ordered by it.
  std::size_t first_pixel = 0;

  friend bool operator==(const Component&, const Component&) = default;
};

// Disjoint connected components of one image plus a per-pixel index.
class ComponentSet {
 public:
  static constexpr std::int32_t kNone = -1;

  ComponentSet() = default;
  ComponentSet(std::size_t width, std::size_t height,
               std::vector<Component> components,
               std::vector<std::int32_t> index)
      : width_(width),
        height_(height),
        components_(std::move(components)),
        index_(std::move(index)) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t count() const noexcept { return components_.size(); }
  bool empty() const noexcept { return components_.empty(); }

  const std::vector<Component>& components() const noexcept {
    return components_;
  }
  const Component& operator[](std::size_t id) const {
    return components_[id];
  }

  // Component id at a raster index, or kNone.
  std::int32_t id_at(std::size_t index) const { return index_[index]; }
  std::optional<std::uint32_t> component_at(std::size_t row,
                                            std::size_t col) const {
    const auto id = index_[row * width_ + col];
    if (id == kNone) return std::nullopt;
    return static_cast<std::uint32_t>(id);
  }
  std::span<const std::int32_t> index() const noexcept { return index_; }

  // Raster indices of a component's pixels, ascending.
  std::vector<std::size_t> pixels(std::uint32_t id) const {
    const Component& c = components_[id];
    std::vector<std::size_t> out;
    out.reserve(c.size);
    for (std::size_t r = c.bbox.min_row; r <= c.bbox.max_row; ++r) {
      for (std::size_t col = c.bbox.min_col; col <= c.bbox.max_col; ++col) {
        const std::size_t i = r * width_ + col;
        if (index_[i] == static_cast<std::int32_t>(id)) out.push_back(i);
      }
    }
    return out;
  }

  std::size_t total_pixels() const noexcept {
    std::size_t total = 0;
    for (const auto& c : components_) total += c.size;
    return total;
  }

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<Component> components_;
  std::vector<std::int32_t> index_;
};

enum class Connectivity { kFour, kEight };

namespace detail {

class DisjointSets {
 public:
  std::uint32_t make_set() {
    parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
    return parent_.back();
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void join(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Keep the smaller (earlier) root so roots stay in raster order.
    if (a < b) {
      parent_[b] = a;
    } else {
      parent_[a] = b;
    }
  }

 private:
  std::vector<std::uint32_t> parent_;
};

// Rebuilds component records from a final index whose ids are already in
// raster order of first pixel.
inline ComponentSet assemble(std::size_t width, std::size_t height,
                             std::vector<std::int32_t> index,
                             std::size_t count) {
  std::vector<Component> components(count);
  std::vector<bool> seen(count, false);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const std::int32_t id = index[r * width + c];
      if (id == ComponentSet::kNone) continue;
      Component& comp = components[static_cast<std::size_t>(id)];
      if (!seen[static_cast<std::size_t>(id)]) {
        seen[static_cast<std::size_t>(id)] = true;
        comp.id = static_cast<std::uint32_t>(id);
        comp.first_pixel = r * width + c;
        comp.bbox = {r, c, r, c};
      }
      ++comp.size;
      comp.bbox.min_col = std::min(comp.bbox.min_col, c);
      comp.bbox.max_col = std::max(comp.bbox.max_col, c);
      comp.bbox.max_row = r;
    }
  }
  return ComponentSet(width, height, std::move(components), std::move(index));
}

// Two-pass union-find labeling over pixels for which `is_foreground(i)`
// holds.
template <typename Foreground>
ComponentSet label_components(std::size_t width, std::size_t height,
                              Foreground&& is_foreground,
                              Connectivity connectivity) {
  std::vector<std::int32_t> index(width * height, ComponentSet::kNone);
  DisjointSets sets;
  const bool eight = connectivity == Connectivity::kEight;

  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const std::size_t i = r * width + c;
      if (!is_foreground(i)) continue;
      std::int32_t label = ComponentSet::kNone;
      auto visit = [&](std::size_t j) {
        const std::int32_t other = index[j];
        if (other == ComponentSet::kNone) return;
        if (label == ComponentSet::kNone) {
          label = other;
        } else if (label != other) {
          sets.join(static_cast<std::uint32_t>(label),
                    static_cast<std::uint32_t>(other));
        }
      };
      if (c > 0) visit(i - 1);
      if (r > 0) {
        visit(i - width);
        if (eight && c > 0) visit(i - width - 1);
        if (eight && c + 1 < width) visit(i - width + 1);
      }
      if (label == ComponentSet::kNone) {
        label = static_cast<std::int32_t>(sets.make_set());
      }
      index[i] = label;
    }
  }

  // Final ids follow the raster order in which each root is first met.
  std::vector<std::int32_t> final_id;
  std::int32_t next = 0;
  for (auto& cell : index) {
    if (cell == ComponentSet::kNone) continue;
    const std::uint32_t root = sets.find(static_cast<std::uint32_t>(cell));
    if (root >= final_id.size()) final_id.resize(root + 1, ComponentSet::kNone);
    if (final_id[root] == ComponentSet::kNone) final_id[root] = next++;
    cell = final_id[root];
  }
  return assemble(width, height, std::move(index),
                  static_cast<std::size_t>(next));
}

}  // namespace detail

// Maximal 8-connected components of the non-zero cells of `mask`.
template <typename T>
ComponentSet extract_components(const Grid<T>& mask) {
  const auto cells = mask.cells();
  return detail::label_components(
      mask.width(), mask.height(),
      [&](std::size_t i) { return cells[i] != T{}; }, Connectivity::kEight);
}

// Ground-truth anomaly components. Void and NotAnomaly are background.
inline ComponentSet extract_components(const LabelMap& labels) {
  const auto cells = labels.cells();
  return detail::label_components(
      labels.width(), labels.height(),
      [&](std::size_t i) { return cells[i] == Label::kAnomaly; },
      Connectivity::kEight);
}

// Keeps components with size >= min_size ("smaller than" is discarded) and
// renumbers the survivors in raster order.
inline ComponentSet filter_by_size(const ComponentSet& set,
                                   std::size_t min_size) {
  if (min_size <= 1) return set;
  std::vector<std::int32_t> remap(set.count(), ComponentSet::kNone);
  std::int32_t next = 0;
  for (const auto& c : set.components()) {
    if (c.size >= min_size) remap[c.id] = next++;
  }
  std::vector<std::int32_t> index(set.index().begin(), set.index().end());
  for (auto& cell : index) {
    if (cell != ComponentSet::kNone) cell = remap[static_cast<std::size_t>(cell)];
  }
  std::vector<Component> kept;
  kept.reserve(static_cast<std::size_t>(next));
  for (const auto& c : set.components()) {
    if (remap[c.id] == ComponentSet::kNone) continue;
    Component copy = c;
    copy.id = static_cast<std::uint32_t>(remap[c.id]);
    kept.push_back(copy);
  }
  return ComponentSet(set.width(), set.height(), std::move(kept),
                      std::move(index));
}

// Mask with exactly the pixels of the components in `set`.
inline BinaryMask to_mask(const ComponentSet& set) {
  std::vector<std::uint8_t> cells(set.width() * set.height(), 0);
  const auto index = set.index();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i] = index[i] != ComponentSet::kNone ? 1 : 0;
  }
  return BinaryMask(set.width(), set.height(), std::move(cells));
}

}  // namespace anoseg
