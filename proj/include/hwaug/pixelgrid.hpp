#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hwaug {

/**
 * @brief 8-bit grayscale pixel grid stored row-major.
 *
 * 0 is background (black paper), 255 is the brightest ink. Pixel (r, c)
 * lives at index r * width + c.
 */
class GrayImage {
public:
  GrayImage() = default;

  GrayImage(std::size_t width, std::size_t height)
      : width_(width), height_(height), pixels_(checked_area(width, height), 0) {}

  GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (pixels_.size() != checked_area(width, height))
      throw std::invalid_argument("GrayImage: pixel count " + std::to_string(pixels_.size()) +
                                  " does not match " + std::to_string(width) + "x" +
                                  std::to_string(height));
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }
  std::uint8_t& at(std::size_t row, std::size_t col) { return pixels_[row * width_ + col]; }

  std::uint8_t* row_data(std::size_t row) { return pixels_.data() + row * width_; }
  const std::uint8_t* row_data(std::size_t row) const { return pixels_.data() + row * width_; }

  const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }
  std::vector<std::uint8_t>& pixels() noexcept { return pixels_; }

  bool same_shape(const GrayImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
  static std::size_t checked_area(std::size_t width, std::size_t height) {
    if (width == 0 || height == 0)
      throw std::invalid_argument("GrayImage: dimensions must be positive");
    return width * height;
  }

  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/**
 * @brief Images plus class labels. All images share one shape and every
 * label is below num_classes.
 */
struct LabeledDataset {
  std::vector<GrayImage> images;
  std::vector<std::uint32_t> labels;
  std::uint32_t num_classes = 1;

  std::size_t size() const noexcept { return images.size(); }

  /// Throws std::invalid_argument if an invariant is broken.
  void validate() const {
    if (images.size() != labels.size())
      throw std::invalid_argument("LabeledDataset: " + std::to_string(images.size()) +
                                  " images but " + std::to_string(labels.size()) + " labels");
    if (num_classes == 0)
      throw std::invalid_argument("LabeledDataset: num_classes must be positive");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] >= num_classes)
        throw std::invalid_argument("LabeledDataset: label " + std::to_string(labels[i]) +
                                    " at index " + std::to_string(i) + " exceeds num_classes");
    }
    for (const auto& img : images) {
      if (!img.same_shape(images.front()))
        throw std::invalid_argument("LabeledDataset: images differ in dimensions");
    }
  }

  /// Builds a dataset whose class count is one past the largest label.
  static LabeledDataset from_parts(std::vector<GrayImage> images, std::vector<std::uint32_t> labels) {
    LabeledDataset ds;
    ds.images = std::move(images);
    ds.labels = std::move(labels);
    const auto max_it = std::max_element(ds.labels.begin(), ds.labels.end());
    ds.num_classes = max_it == ds.labels.end() ? 1 : *max_it + 1;
    ds.validate();
    return ds;
  }
};

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

/// Anything that yields raw 64-bit draws. Kernels are written against this so
/// tests can script exact draw sequences.
template <typename T>
concept DrawSource = requires(T& src) {
  { src.next_u64() } -> std::same_as<std::uint64_t>;
};

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

inline constexpr std::uint64_t splitmix_finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/**
 * @brief SplitMix64 generator. Output is identical on every platform.
 */
class RngStream {
public:
  constexpr explicit RngStream(std::uint64_t seed = 0) noexcept : state_(seed) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += kSplitMixGamma;
    return splitmix_finalize(state_);
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

  friend constexpr bool operator==(const RngStream&, const RngStream&) = default;

private:
  std::uint64_t state_;
};

/**
 * @brief Maps one draw onto [0, n) as floor(u * n / 2^64).
 *
 * Consumes exactly one draw; there is no rejection loop, so the number of
 * draws per call is fixed. Requires 1 <= n <= 2^32.
 */
template <DrawSource Source>
std::uint64_t uniform_below(Source& src, std::uint64_t n) {
  if (n == 0 || n > (std::uint64_t{1} << 32))
    throw std::invalid_argument("uniform_below: n must be in [1, 2^32]");
  const unsigned __int128 product = static_cast<unsigned __int128>(src.next_u64()) * n;
  return static_cast<std::uint64_t>(product >> 64);
}

/// A draw u means "true" iff u < bound. `always` covers p == 1, whose
/// bound 2^64 does not fit in 64 bits.
struct BernoulliThreshold {
  std::uint64_t bound = 0;
  bool always = false;
};

inline BernoulliThreshold bernoulli_threshold(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("bernoulli: probability must be in [0, 1]");
  if (p == 1.0)
    return {0, true};
  // p * 2^64 is exact in binary floating point; the cast floors it.
  return {static_cast<std::uint64_t>(std::ldexp(p, 64)), false};
}

/// True iff the next draw is below floor(p * 2^64). Consumes one draw, even for p = 0 or 1.
template <DrawSource Source>
bool bernoulli(Source& src, double p) {
  const auto threshold = bernoulli_threshold(p);
  const std::uint64_t u = src.next_u64();
  return threshold.always || u < threshold.bound;
}

/**
 * @brief Per-index stream: seeded with the (index + 1)-th output of a
 * master SplitMix64 stream seeded with base_seed.
 *
 * SplitMix64's state advances by a constant, so the master output is
 * computed directly instead of stepping the master stream.
 */
inline constexpr RngStream derive_substream(std::uint64_t base_seed, std::uint64_t index) noexcept {
  const std::uint64_t master_state = base_seed + (index + 1) * kSplitMixGamma;
  return RngStream(splitmix_finalize(master_state));
}

} // namespace hwaug
