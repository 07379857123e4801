#pragma once

#include "hwaug/pixelgrid.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hwaug {

enum class Method { Thick, Thin, Elongate, LineErase };

/// Thick/Thin take Complete or Random; Elongate/LineErase take an axis.
enum class Mode { Complete, Random, XAxis, YAxis };

inline constexpr bool is_axis_method(Method m) noexcept {
  return m == Method::Elongate || m == Method::LineErase;
}

inline constexpr bool is_axis_mode(Mode m) noexcept { return m == Mode::XAxis || m == Mode::YAxis; }

inline constexpr std::string_view to_string(Method m) noexcept {
  switch (m) {
  case Method::Thick: return "thick";
  case Method::Thin: return "thin";
  case Method::Elongate: return "elongate";
  case Method::LineErase: return "lineerase";
  }
  return "?";
}

inline constexpr std::string_view to_string(Mode m) noexcept {
  switch (m) {
  case Mode::Complete: return "complete";
  case Mode::Random: return "random";
  case Mode::XAxis: return "x";
  case Mode::YAxis: return "y";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
  for (Method m : {Method::Thick, Method::Thin, Method::Elongate, Method::LineErase})
    if (to_string(m) == s)
      return m;
  return std::nullopt;
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  for (Mode m : {Mode::Complete, Mode::Random, Mode::XAxis, Mode::YAxis})
    if (to_string(m) == s)
      return m;
  return std::nullopt;
}

/**
 * @brief Parameters for one augmentation kernel.
 *
 * A pixel with value > threshold is a character (ink) pixel; anything at or
 * below is background. k bounds the random reduction applied by Thick, and
 * row_prob is the per-row selection chance in Random mode.
 */
struct AugmentConfig {
  Method method = Method::Thick;
  Mode mode = Mode::Complete;
  int threshold = 10;
  int k = 10;
  double row_prob = 0.5;

  void validate() const {
    if (threshold < 0 || threshold > 255)
      throw std::invalid_argument("threshold must be in [0, 255], got " + std::to_string(threshold));
    if (k < 1)
      throw std::invalid_argument("k must be >= 1, got " + std::to_string(k));
    if (!(row_prob >= 0.0 && row_prob <= 1.0))
      throw std::invalid_argument("row_prob must be in [0, 1]");
    if (is_axis_method(method) != is_axis_mode(mode))
      throw std::invalid_argument("mode '" + std::string(to_string(mode)) + "' is not valid for method '" +
                                  std::string(to_string(method)) + "'");
  }

  static AugmentConfig make(Method method, Mode mode) {
    AugmentConfig cfg;
    cfg.method = method;
    cfg.mode = mode;
    return cfg;
  }
};

namespace detail {

inline void require_method(const AugmentConfig& cfg, Method expected) {
  if (cfg.method != expected)
    throw std::invalid_argument("kernel for '" + std::string(to_string(expected)) + "' called with method '" +
                                std::string(to_string(cfg.method)) + "'");
  cfg.validate();
}

/// Complete mode touches every row; Random spends one Bernoulli draw per row.
template <DrawSource Source>
bool row_selected(const AugmentConfig& cfg, Source& rng) {
  return cfg.mode == Mode::Complete || bernoulli(rng, cfg.row_prob);
}

} // namespace detail

/**
 * @brief Bolds strokes by filling the background pixel in front of each stroke.
 *
 * For every selected row, a left-to-right pass visits each background pixel
 * whose right neighbour is ink and sets it to (neighbour - d), then a
 * right-to-left pass over the updated row does the same with the left
 * neighbour. d is drawn per filled pixel from [0, k) and the result clamps at 0.
 * Ink pixels are never modified.
 */
template <DrawSource Source>
GrayImage thicken(const GrayImage& img, const AugmentConfig& cfg, Source& rng) {
  detail::require_method(cfg, Method::Thick);
  GrayImage out = img;
  const std::size_t w = out.width();
  const auto t = static_cast<std::uint8_t>(cfg.threshold);
  const auto k = static_cast<std::uint64_t>(cfg.k);

  auto fill_from = [&](std::uint8_t& target, std::uint8_t source) {
    const auto d = static_cast<int>(uniform_below(rng, k));
    target = static_cast<std::uint8_t>(std::max(0, int{source} - d));
  };

  for (std::size_t r = 0; r < out.height(); ++r) {
    if (!detail::row_selected(cfg, rng))
      continue;
    std::uint8_t* row = out.row_data(r);
    for (std::size_t c = 0; c + 1 < w; ++c) {
      if (row[c] <= t && row[c + 1] > t)
        fill_from(row[c], row[c + 1]);
    }
    for (std::size_t c = w - 1; c >= 1; --c) {
      if (row[c] <= t && row[c - 1] > t)
        fill_from(row[c], row[c - 1]);
    }
  }
  return out;
}

/**
 * @brief Thins strokes by zeroing the outermost pixel of every ink run.
 *
 * The left pass zeroes the first pixel of each run (a run may start at the
 * image edge); the right pass then zeroes the last pixel of each run in the
 * updated row. A one-pixel run therefore disappears in the left pass.
 * Only Random mode consumes draws (one per row).
 */
template <DrawSource Source>
GrayImage thin(const GrayImage& img, const AugmentConfig& cfg, Source& rng) {
  detail::require_method(cfg, Method::Thin);
  GrayImage out = img;
  const std::size_t w = out.width();
  const auto t = static_cast<std::uint8_t>(cfg.threshold);

  for (std::size_t r = 0; r < out.height(); ++r) {
    if (!detail::row_selected(cfg, rng))
      continue;
    std::uint8_t* row = out.row_data(r);
    // Skip the pixel after a zeroed one; it is not a new run start.
    for (std::size_t c = 0; c < w; ++c) {
      if (row[c] > t && (c == 0 || row[c - 1] <= t)) {
        row[c] = 0;
        ++c;
      }
    }
    for (std::size_t c = w; c-- > 0;) {
      if (row[c] > t && (c + 1 == w || row[c + 1] <= t)) {
        row[c] = 0;
        if (c == 0)
          break;
        --c;
      }
    }
  }
  return out;
}

/**
 * @brief Duplicates one uniformly chosen row (XAxis) or column (YAxis) and
 * drops the last one so the image keeps its size. One draw.
 */
template <DrawSource Source>
GrayImage elongate(const GrayImage& img, const AugmentConfig& cfg, Source& rng) {
  detail::require_method(cfg, Method::Elongate);
  GrayImage out = img;
  const std::size_t w = img.width();
  const std::size_t h = img.height();

  if (cfg.mode == Mode::XAxis) {
    const auto pick = static_cast<std::size_t>(uniform_below(rng, h));
    // Rows after the pick shift down by one; the last input row falls off.
    for (std::size_t r = pick + 1; r < h; ++r)
      std::copy_n(img.row_data(r - 1), w, out.row_data(r));
  } else {
    const auto pick = static_cast<std::size_t>(uniform_below(rng, w));
    for (std::size_t r = 0; r < h; ++r) {
      const std::uint8_t* src = img.row_data(r);
      std::uint8_t* dst = out.row_data(r);
      for (std::size_t c = pick + 1; c < w; ++c)
        dst[c] = src[c - 1];
    }
  }
  return out;
}

/// Zeroes one uniformly chosen row (XAxis) or column (YAxis). One draw.
template <DrawSource Source>
GrayImage line_erase(const GrayImage& img, const AugmentConfig& cfg, Source& rng) {
  detail::require_method(cfg, Method::LineErase);
  GrayImage out = img;
  if (cfg.mode == Mode::XAxis) {
    const auto r = static_cast<std::size_t>(uniform_below(rng, img.height()));
    std::fill_n(out.row_data(r), out.width(), std::uint8_t{0});
  } else {
    const auto c = static_cast<std::size_t>(uniform_below(rng, img.width()));
    for (std::size_t r = 0; r < out.height(); ++r)
      out.at(r, c) = 0;
  }
  return out;
}

/// Dispatches on cfg.method.
template <DrawSource Source>
GrayImage apply(const GrayImage& img, const AugmentConfig& cfg, Source& rng) {
  switch (cfg.method) {
  case Method::Thick: return thicken(img, cfg, rng);
  case Method::Thin: return thin(img, cfg, rng);
  case Method::Elongate: return elongate(img, cfg, rng);
  case Method::LineErase: return line_erase(img, cfg, rng);
  }
  throw std::invalid_argument("unknown augmentation method");
}

} // namespace hwaug
