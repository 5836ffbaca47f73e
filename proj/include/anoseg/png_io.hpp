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

#include <png.h>

#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "anoseg/error.hpp"

namespace anoseg::png {

struct Header {
  std::size_t width = 0;
  std::size_t height = 0;
  int bit_depth = 0;
};

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return f;
}

struct ReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~ReadGuard() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct WriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~WriteGuard() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

inline void warn_silently(png_structp, png_const_charp) {}

}  // namespace detail

// Decodes a single-channel grayscale PNG one row at a time. `on_header` sees
// the image geometry before any row; `on_row` receives each row as 16-bit
// samples (8-bit images are widened without scaling).
template <typename OnHeader, typename OnRow>
void read_gray(const std::filesystem::path& path, OnHeader&& on_header,
               OnRow&& on_row) {
  auto file = detail::open_file(path, "rb");
  unsigned char signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 ||
      png_sig_cmp(signature, 0, 8) != 0) {
    throw Error(ErrorCode::kUnsupportedFormat,
                path.string() + " is not a PNG file");
  }

  detail::ReadGuard guard;
  guard.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                     detail::warn_silently);
  if (!guard.png) throw Error(ErrorCode::kIoError, "png_create_read_struct");
  guard.info = png_create_info_struct(guard.png);
  if (!guard.info) throw Error(ErrorCode::kIoError, "png_create_info_struct");

  // Row buffers live on the heap behind a pointer fixed before setjmp, so a
  // longjmp never leaves a modified automatic object behind.
  struct Buffers {
    std::vector<std::uint8_t> raw;
    std::vector<std::uint16_t> row;
  };
  const auto buffers = std::make_unique<Buffers>();
  auto& raw = buffers->raw;
  auto& row = buffers->row;
  // libpng reports decode errors by longjmp back here; only C frames are
  // skipped.
  if (setjmp(png_jmpbuf(guard.png))) {
    throw Error(ErrorCode::kIoError, "corrupt PNG " + path.string());
  }
  png_init_io(guard.png, file.get());
  png_set_sig_bytes(guard.png, 8);
  png_read_info(guard.png, guard.info);

  const auto color = png_get_color_type(guard.png, guard.info);
  const int depth = png_get_bit_depth(guard.png, guard.info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    throw Error(ErrorCode::kUnsupportedFormat,
                path.string() + " is not single-channel grayscale");
  }
  if (depth < 8) png_set_expand_gray_1_2_4_to_8(guard.png);
  if (depth == 16) png_set_swap(guard.png);
  png_read_update_info(guard.png, guard.info);

  Header header;
  header.width = png_get_image_width(guard.png, guard.info);
  header.height = png_get_image_height(guard.png, guard.info);
  header.bit_depth = depth;
  on_header(header);

  const std::size_t bytes = png_get_rowbytes(guard.png, guard.info);
  raw.resize(bytes);
  row.resize(header.width);
  for (std::size_t r = 0; r < header.height; ++r) {
    png_read_row(guard.png, raw.data(), nullptr);
    if (depth == 16) {
      std::memcpy(row.data(), raw.data(), header.width * 2);
    } else {
      for (std::size_t c = 0; c < header.width; ++c) row[c] = raw[c];
    }
    on_row(r, std::span<const std::uint16_t>(row));
  }
  png_read_end(guard.png, nullptr);
}

// Writes a grayscale PNG of depth 8 or 16 from row-major samples.
inline void write_gray(const std::filesystem::path& path, std::size_t width,
                       std::size_t height, int bit_depth,
                       std::span<const std::uint16_t> samples) {
  if (bit_depth != 8 && bit_depth != 16) {
    throw Error(ErrorCode::kUnsupportedFormat, "bit depth must be 8 or 16");
  }
  if (samples.size() != width * height) {
    throw Error(ErrorCode::kDimensionMismatch, "sample count != width*height");
  }
  auto file = detail::open_file(path, "wb");
  detail::WriteGuard guard;
  guard.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                      detail::warn_silently);
  if (!guard.png) throw Error(ErrorCode::kIoError, "png_create_write_struct");
  guard.info = png_create_info_struct(guard.png);
  if (!guard.info) throw Error(ErrorCode::kIoError, "png_create_info_struct");

  const std::size_t bytes_per_sample = bit_depth == 16 ? 2 : 1;
  const auto buffer =
      std::make_unique<std::vector<std::uint8_t>>(width * bytes_per_sample);
  auto& raw = *buffer;
  if (setjmp(png_jmpbuf(guard.png))) {
    throw Error(ErrorCode::kIoError, "failed writing " + path.string());
  }
  png_init_io(guard.png, file.get());
  png_set_IHDR(guard.png, guard.info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(guard.png, 1);
  png_write_info(guard.png, guard.info);
  for (std::size_t r = 0; r < height; ++r) {
    const auto* src = samples.data() + r * width;
    if (bit_depth == 16) {
      for (std::size_t c = 0; c < width; ++c) {
        raw[2 * c] = static_cast<std::uint8_t>(src[c] >> 8);
        raw[2 * c + 1] = static_cast<std::uint8_t>(src[c] & 0xff);
      }
    } else {
      for (std::size_t c = 0; c < width; ++c) {
        raw[c] = static_cast<std::uint8_t>(src[c]);
      }
    }
    png_write_row(guard.png, raw.data());
  }
  png_write_end(guard.png, nullptr);
}

// Writes an 8-bit RGB PNG. Only used to produce inputs that must be
// rejected.
inline void write_rgb(const std::filesystem::path& path, std::size_t width,
                      std::size_t height, std::span<const std::uint8_t> rgb) {
  auto file = detail::open_file(path, "wb");
  detail::WriteGuard guard;
  guard.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                      detail::warn_silently);
  guard.info = png_create_info_struct(guard.png);
  if (setjmp(png_jmpbuf(guard.png))) {
    throw Error(ErrorCode::kIoError, "failed writing " + path.string());
  }
  png_init_io(guard.png, file.get());
  png_set_IHDR(guard.png, guard.info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(guard.png, guard.info);
  for (std::size_t r = 0; r < height; ++r) {
    png_write_row(guard.png,
                  const_cast<std::uint8_t*>(rgb.data() + r * width * 3));
  }
  png_write_end(guard.png, nullptr);
}

}  // namespace anoseg::png
