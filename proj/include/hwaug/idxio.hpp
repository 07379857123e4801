#pragma once

#include "hwaug/pixelgrid.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hwaug::idx {

enum class ErrorKind {
  BadMagic,
  TruncatedData,
  TrailingBytes,
  ZeroExtent,
  HeterogeneousDims,
  EmptyInput,
  CountOverflow,
  LabelOverflow,
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
  case ErrorKind::BadMagic: return "BadMagic";
  case ErrorKind::TruncatedData: return "TruncatedData";
  case ErrorKind::TrailingBytes: return "TrailingBytes";
  case ErrorKind::ZeroExtent: return "ZeroExtent";
  case ErrorKind::HeterogeneousDims: return "HeterogeneousDims";
  case ErrorKind::EmptyInput: return "EmptyInput";
  case ErrorKind::CountOverflow: return "CountOverflow";
  case ErrorKind::LabelOverflow: return "LabelOverflow";
  }
  return "Unknown";
}

/// Parse or encode failure. offset() is the byte position the problem was
/// detected at (0 for encode errors).
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::size_t offset, const std::string& what)
      : std::runtime_error(what), kind_(kind), offset_(offset) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

private:
  ErrorKind kind_;
  std::size_t offset_;
};

/// Raised when a file cannot be opened, read or written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint8_t kTypeUnsignedByte = 0x08;
inline constexpr std::uint8_t kRankImages = 3;
inline constexpr std::uint8_t kRankLabels = 1;

struct Header {
  std::array<std::uint8_t, 4> magic{};
  std::vector<std::uint32_t> dims;

  std::uint8_t type_code() const noexcept { return magic[2]; }
  std::uint8_t rank() const noexcept { return magic[3]; }
  std::size_t byte_size() const noexcept { return 4 + 4 * dims.size(); }
};

namespace detail {

inline std::uint32_t load_be32(std::span<const std::uint8_t> bytes, std::size_t pos) {
  return (std::uint32_t{bytes[pos]} << 24) | (std::uint32_t{bytes[pos + 1]} << 16) |
         (std::uint32_t{bytes[pos + 2]} << 8) | std::uint32_t{bytes[pos + 3]};
}

inline void store_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline std::string hex_byte(std::uint8_t b) {
  static constexpr char digits[] = "0123456789ABCDEF";
  return std::string("0x") + digits[b >> 4] + digits[b & 0xF];
}

// Checks the payload length against the header before anything is allocated.
inline void check_payload(std::size_t header_size, unsigned __int128 expected, std::size_t total) {
  const std::size_t available = total - header_size;
  if (expected > available)
    throw Error(ErrorKind::TruncatedData, total,
                "truncated data: header promises " + std::to_string(static_cast<std::uint64_t>(expected)) +
                    " data bytes but only " + std::to_string(available) + " present");
  if (expected < available)
    throw Error(ErrorKind::TrailingBytes, header_size + static_cast<std::size_t>(expected),
                "trailing bytes: " + std::to_string(available - static_cast<std::size_t>(expected)) +
                    " bytes after the declared data");
}

} // namespace detail

/**
 * @brief Parses the magic and extents. With expected_rank == 0 any supported
 * rank (1 or 3) is accepted.
 */
inline Header parse_header(std::span<const std::uint8_t> bytes, std::uint8_t expected_rank = 0) {
  if (bytes.size() >= 2 && bytes[0] == 0x1F && bytes[1] == 0x8B)
    throw Error(ErrorKind::BadMagic, 0,
                "bad magic: input is gzip-compressed (0x1F 0x8B); decompress it first, e.g. `gunzip file.gz`");
  if (bytes.size() < 4)
    throw Error(ErrorKind::BadMagic, bytes.size(), "bad magic: input shorter than the 4-byte magic");

  Header header;
  std::copy_n(bytes.begin(), 4, header.magic.begin());
  const auto rank = header.rank();
  const bool rank_ok = expected_rank == 0 ? (rank == kRankImages || rank == kRankLabels) : rank == expected_rank;
  if (bytes[0] != 0x00 || bytes[1] != 0x00 || bytes[2] != kTypeUnsignedByte || !rank_ok) {
    std::string want = expected_rank == 0 ? "00 00 08 {01|03}"
                                          : "00 00 08 0" + std::to_string(expected_rank);
    throw Error(ErrorKind::BadMagic, 0,
                "bad magic: got " + detail::hex_byte(bytes[0]) + " " + detail::hex_byte(bytes[1]) + " " +
                    detail::hex_byte(bytes[2]) + " " + detail::hex_byte(bytes[3]) + ", expected " + want);
  }

  const std::size_t header_size = 4 + 4 * std::size_t{rank};
  if (bytes.size() < header_size)
    throw Error(ErrorKind::TruncatedData, bytes.size(),
                "truncated header: need " + std::to_string(header_size) + " bytes");
  header.dims.reserve(rank);
  for (std::size_t d = 0; d < rank; ++d)
    header.dims.push_back(detail::load_be32(bytes, 4 + 4 * d));
  return header;
}

/// Image file: magic 00 00 08 03, extents (count, height, width), raw pixels.
inline std::vector<GrayImage> read_images(std::span<const std::uint8_t> bytes) {
  const Header header = parse_header(bytes, kRankImages);
  const std::uint64_t count = header.dims[0];
  const std::uint64_t height = header.dims[1];
  const std::uint64_t width = header.dims[2];

  const unsigned __int128 expected = static_cast<unsigned __int128>(count) * height * width;
  detail::check_payload(header.byte_size(), expected, bytes.size());
  if (count > 0 && (height == 0 || width == 0))
    throw Error(ErrorKind::ZeroExtent, 8, "zero image extent with non-zero image count");

  std::vector<GrayImage> images;
  images.reserve(count);
  const std::size_t area = height * width;
  auto cursor = bytes.begin() + static_cast<std::ptrdiff_t>(header.byte_size());
  for (std::uint64_t i = 0; i < count; ++i) {
    images.emplace_back(width, height, std::vector<std::uint8_t>(cursor, cursor + static_cast<std::ptrdiff_t>(area)));
    cursor += static_cast<std::ptrdiff_t>(area);
  }
  return images;
}

/// Label file: magic 00 00 08 01, one extent, one byte per label.
inline std::vector<std::uint32_t> read_labels(std::span<const std::uint8_t> bytes) {
  const Header header = parse_header(bytes, kRankLabels);
  detail::check_payload(header.byte_size(), header.dims[0], bytes.size());
  return {bytes.begin() + static_cast<std::ptrdiff_t>(header.byte_size()), bytes.end()};
}

inline std::vector<std::uint8_t> write_images(std::span<const GrayImage> images) {
  if (images.empty())
    throw Error(ErrorKind::EmptyInput, 0, "cannot write an empty image sequence: dimensions are unknown");
  const GrayImage& first = images.front();
  for (std::size_t i = 1; i < images.size(); ++i) {
    if (!images[i].same_shape(first))
      throw Error(ErrorKind::HeterogeneousDims, 0,
                  "image " + std::to_string(i) + " is " + std::to_string(images[i].width()) + "x" +
                      std::to_string(images[i].height()) + ", expected " + std::to_string(first.width()) +
                      "x" + std::to_string(first.height()));
  }
  constexpr std::uint64_t kMax = 0xFFFFFFFFULL;
  if (images.size() > kMax || first.width() > kMax || first.height() > kMax)
    throw Error(ErrorKind::CountOverflow, 0, "image count or extent does not fit in 32 bits");

  std::vector<std::uint8_t> out;
  out.reserve(16 + images.size() * first.size());
  out.insert(out.end(), {0x00, 0x00, kTypeUnsignedByte, kRankImages});
  detail::store_be32(out, static_cast<std::uint32_t>(images.size()));
  detail::store_be32(out, static_cast<std::uint32_t>(first.height()));
  detail::store_be32(out, static_cast<std::uint32_t>(first.width()));
  for (const auto& img : images)
    out.insert(out.end(), img.pixels().begin(), img.pixels().end());
  return out;
}

inline std::vector<std::uint8_t> write_labels(std::span<const std::uint32_t> labels) {
  if (labels.size() > 0xFFFFFFFFULL)
    throw Error(ErrorKind::CountOverflow, 0, "label count does not fit in 32 bits");
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  out.insert(out.end(), {0x00, 0x00, kTypeUnsignedByte, kRankLabels});
  detail::store_be32(out, static_cast<std::uint32_t>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 0xFF)
      throw Error(ErrorKind::LabelOverflow, 0,
                  "label " + std::to_string(labels[i]) + " at index " + std::to_string(i) + " exceeds 255");
    out.push_back(static_cast<std::uint8_t>(labels[i]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad())
    throw IoError("error reading " + path.string());
  return bytes;
}

/// Reads at most max_bytes from the start of a file.
inline std::vector<std::uint8_t> read_file_prefix(const std::filesystem::path& path, std::size_t max_bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes(max_bytes);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(max_bytes));
  bytes.resize(static_cast<std::size_t>(in.gcount()));
  return bytes;
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw IoError("error writing " + path.string());
}

} // namespace hwaug::idx
