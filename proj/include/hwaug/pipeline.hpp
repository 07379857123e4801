#pragma once

#include "hwaug/augment.hpp"
#include "hwaug/pixelgrid.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

namespace hwaug {

struct PipelineConfig {
  AugmentConfig augment;
  double apply_prob = 0.5;
  std::uint64_t base_seed = 0;

  void validate() const {
    augment.validate();
    if (!(apply_prob >= 0.0 && apply_prob <= 1.0))
      throw std::invalid_argument("apply_prob must be in [0, 1]");
  }
};

/// Worker threads for augment_images. Image i goes to worker i % threads, so
/// any thread count > 1 visits images out of sequential order.
struct Schedule {
  unsigned threads = 1;
};

struct AugmentOutcome {
  std::vector<GrayImage> images;
  /// applied[i] is 1 when image i drew "augment" from its apply draw.
  std::vector<std::uint8_t> applied;

  std::size_t applied_count() const {
    return static_cast<std::size_t>(std::count(applied.begin(), applied.end(), std::uint8_t{1}));
  }
};

/**
 * @brief Augments each image with its own derived stream.
 *
 * Image i uses derive_substream(base_seed, i). The first draw decides (with
 * apply_prob) whether the kernel runs; the kernel continues on that stream.
 * Output depends only on (images, cfg), never on the schedule.
 */
inline AugmentOutcome augment_images(std::span<const GrayImage> images, const PipelineConfig& cfg,
                                     Schedule schedule = {}) {
  cfg.validate();
  AugmentOutcome result;
  result.images.resize(images.size());
  result.applied.assign(images.size(), 0);

  auto process = [&](std::size_t i) {
    RngStream rng = derive_substream(cfg.base_seed, i);
    if (bernoulli(rng, cfg.apply_prob)) {
      result.images[i] = apply(images[i], cfg.augment, rng);
      result.applied[i] = 1;
    } else {
      result.images[i] = images[i];
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min<std::size_t>(schedule.threads, images.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < images.size(); ++i)
      process(i);
    return result;
  }

  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < images.size(); i += threads)
          process(i);
      });
    }
  }
  return result;
}

/// Labels and class count pass through unchanged.
inline LabeledDataset augment_dataset(const LabeledDataset& ds, const PipelineConfig& cfg, Schedule schedule = {}) {
  LabeledDataset out;
  out.images = augment_images(ds.images, cfg, schedule).images;
  out.labels = ds.labels;
  out.num_classes = ds.num_classes;
  return out;
}

struct InkStats {
  std::size_t nonzero = 0;
  std::uint64_t ink_sum = 0;

  friend bool operator==(const InkStats&, const InkStats&) = default;
};

inline InkStats ink_stats(const GrayImage& img) {
  InkStats s;
  for (std::uint8_t v : img.pixels()) {
    s.nonzero += v != 0;
    s.ink_sum += v;
  }
  return s;
}

inline std::vector<InkStats> ink_stats(std::span<const GrayImage> images) {
  std::vector<InkStats> out;
  out.reserve(images.size());
  for (const auto& img : images)
    out.push_back(ink_stats(img));
  return out;
}

inline std::vector<InkStats> ink_stats(const LabeledDataset& ds) { return ink_stats(std::span(ds.images)); }

} // namespace hwaug
