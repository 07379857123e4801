#pragma once

#include "hwaug/pixelgrid.hpp"

#include <nlohmann/json.hpp>
#include <zlib.h>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hwaug {

class RenderError : public std::runtime_error {
public:
  enum class Kind { HeterogeneousDims, GridOverflow, BadSpec };

  RenderError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/**
 * @brief Sheet layout. cell_width/cell_height give the cell size when no
 * images are supplied; otherwise the image size wins.
 */
struct GridSpec {
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::size_t cell_border = 1;
  std::size_t scale = 4;
  std::size_t cell_width = 28;
  std::size_t cell_height = 28;
};

inline constexpr std::uint8_t kBorderIntensity = 128;

struct ManifestEntry {
  std::size_t cell = 0; // 1-based, row-major
  std::size_t source_index = 0;
  std::optional<std::string> tag;
};

struct RenderedGrid {
  GrayImage canvas;
  std::vector<ManifestEntry> manifest;
};

/// Top-left canvas coordinate of the interior of cell (row, col).
struct CellOrigin {
  std::size_t x = 0;
  std::size_t y = 0;
};

inline CellOrigin cell_origin(const GridSpec& spec, std::size_t cell_w, std::size_t cell_h, std::size_t row,
                              std::size_t col) {
  return {spec.cell_border + col * (cell_w * spec.scale + spec.cell_border),
          spec.cell_border + row * (cell_h * spec.scale + spec.cell_border)};
}

/**
 * @brief Lays images out row-major on a grid, magnified by nearest neighbour.
 *
 * Occupied cells get a border of intensity 128; unused cells and their
 * borders stay black. source_indices and tags are optional per-image
 * annotations carried into the manifest (defaults: 0..n-1, no tag).
 */
inline RenderedGrid render_grid(std::span<const GrayImage> images, const GridSpec& spec,
                                std::span<const std::size_t> source_indices = {},
                                std::span<const std::string> tags = {}) {
  if (spec.rows == 0 || spec.cols == 0 || spec.scale == 0)
    throw RenderError(RenderError::Kind::BadSpec, "grid rows, cols and scale must be positive");
  if (images.size() > spec.rows * spec.cols)
    throw RenderError(RenderError::Kind::GridOverflow, std::to_string(images.size()) + " images do not fit a " +
                                                           std::to_string(spec.rows) + "x" +
                                                           std::to_string(spec.cols) + " grid");
  if (!source_indices.empty() && source_indices.size() != images.size())
    throw RenderError(RenderError::Kind::BadSpec, "source_indices must match the image count");
  if (!tags.empty() && tags.size() != images.size())
    throw RenderError(RenderError::Kind::BadSpec, "tags must match the image count");

  const std::size_t cell_w = images.empty() ? spec.cell_width : images.front().width();
  const std::size_t cell_h = images.empty() ? spec.cell_height : images.front().height();
  for (const auto& img : images) {
    if (img.width() != cell_w || img.height() != cell_h)
      throw RenderError(RenderError::Kind::HeterogeneousDims, "all grid images must share dimensions");
  }

  const std::size_t pitch_x = cell_w * spec.scale + spec.cell_border;
  const std::size_t pitch_y = cell_h * spec.scale + spec.cell_border;
  RenderedGrid out{GrayImage(spec.cols * pitch_x + spec.cell_border, spec.rows * pitch_y + spec.cell_border), {}};
  GrayImage& canvas = out.canvas;

  for (std::size_t n = 0; n < images.size(); ++n) {
    const std::size_t row = n / spec.cols;
    const std::size_t col = n % spec.cols;
    const std::size_t x0 = col * pitch_x;
    const std::size_t y0 = row * pitch_y;

    // Frame, including the lines shared with neighbours.
    for (std::size_t y = y0; y < y0 + pitch_y + spec.cell_border; ++y) {
      for (std::size_t x = x0; x < x0 + pitch_x + spec.cell_border; ++x) {
        const bool interior = x >= x0 + spec.cell_border && x < x0 + pitch_x && y >= y0 + spec.cell_border &&
                              y < y0 + pitch_y;
        if (!interior)
          canvas.at(y, x) = kBorderIntensity;
      }
    }

    const GrayImage& img = images[n];
    const CellOrigin origin = cell_origin(spec, cell_w, cell_h, row, col);
    for (std::size_t y = 0; y < cell_h * spec.scale; ++y)
      for (std::size_t x = 0; x < cell_w * spec.scale; ++x)
        canvas.at(origin.y + y, origin.x + x) = img.at(y / spec.scale, x / spec.scale);

    ManifestEntry entry;
    entry.cell = n + 1;
    entry.source_index = source_indices.empty() ? n : source_indices[n];
    if (!tags.empty())
      entry.tag = tags[n];
    out.manifest.push_back(std::move(entry));
  }
  return out;
}

/// Manifest as a JSON array of {cell, source_index, tag}; tag is null when unset.
inline nlohmann::json manifest_json(std::span<const ManifestEntry> manifest) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : manifest) {
    arr.push_back({{"cell", e.cell},
                   {"source_index", e.source_index},
                   {"tag", e.tag ? nlohmann::json(*e.tag) : nlohmann::json(nullptr)}});
  }
  return arr;
}

namespace detail {

inline void append_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void append_png_chunk(std::vector<std::uint8_t>& out, const char (&type)[5], std::span<const std::uint8_t> data) {
  append_be32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t type_pos = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, out.data() + type_pos, static_cast<uInt>(4 + data.size()));
  append_be32(out, static_cast<std::uint32_t>(crc));
}

} // namespace detail

/// Encodes an 8-bit grayscale PNG (no alpha, no interlace, filter type 0).
inline std::vector<std::uint8_t> encode_png(const GrayImage& img) {
  std::vector<std::uint8_t> raw;
  raw.reserve(img.height() * (img.width() + 1));
  for (std::size_t r = 0; r < img.height(); ++r) {
    raw.push_back(0);
    raw.insert(raw.end(), img.row_data(r), img.row_data(r) + img.width());
  }

  uLongf compressed_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> compressed(compressed_size);
  if (compress2(compressed.data(), &compressed_size, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK)
    throw std::runtime_error("zlib compression failed");
  compressed.resize(compressed_size);

  std::vector<std::uint8_t> ihdr;
  detail::append_be32(ihdr, static_cast<std::uint32_t>(img.width()));
  detail::append_be32(ihdr, static_cast<std::uint32_t>(img.height()));
  ihdr.insert(ihdr.end(), {8, 0, 0, 0, 0}); // bit depth, grayscale, deflate, filter, no interlace

  std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  detail::append_png_chunk(png, "IHDR", ihdr);
  detail::append_png_chunk(png, "IDAT", compressed);
  detail::append_png_chunk(png, "IEND", {});
  return png;
}

} // namespace hwaug
