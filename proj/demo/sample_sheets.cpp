// Renders one comparison sheet per augmentation method: the first row holds
// the original samples, the following rows the augmented versions.
//
//   hwaug_sample_sheets <images.idx> <out-dir> [count] [seed]

#include "hwaug/hwaug.hpp"

#include <filesystem>
#include <iostream>
#include <string>

namespace fs = std::filesystem;
using namespace hwaug;

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: " << argv[0] << " <images.idx> <out-dir> [count] [seed]\n";
    return 2;
  }
  const fs::path out_dir = argv[2];
  const std::size_t count = argc > 3 ? std::stoul(argv[3]) : 10;
  const std::uint64_t seed = argc > 4 ? std::stoull(argv[4]) : 0;

  try {
    auto images = idx::read_images(idx::read_file(argv[1]));
    if (images.size() < count) {
      std::cerr << "only " << images.size() << " images available\n";
      return 2;
    }
    images.resize(count);
    fs::create_directories(out_dir);

    const std::pair<Method, std::vector<Mode>> sheets[] = {
        {Method::Thick, {Mode::Random, Mode::Complete}},
        {Method::Thin, {Mode::Random, Mode::Complete}},
        {Method::Elongate, {Mode::XAxis, Mode::YAxis}},
        {Method::LineErase, {Mode::XAxis, Mode::YAxis}},
    };
    for (const auto& [method, modes] : sheets) {
      std::vector<GrayImage> cells = images;
      std::vector<std::size_t> sources;
      std::vector<std::string> tags(count, "original");
      for (std::size_t i = 0; i < count; ++i)
        sources.push_back(i);

      for (Mode mode : modes) {
        PipelineConfig cfg;
        cfg.augment = AugmentConfig::make(method, mode);
        cfg.apply_prob = 1.0;
        cfg.base_seed = seed;
        const auto out = augment_images(images, cfg);
        cells.insert(cells.end(), out.images.begin(), out.images.end());
        for (std::size_t i = 0; i < count; ++i) {
          sources.push_back(i);
          tags.push_back(std::string(to_string(method)) + "/" + std::string(to_string(mode)));
        }
      }

      GridSpec spec;
      spec.rows = modes.size() + 1;
      spec.cols = count;
      const auto grid = render_grid(cells, spec, sources, tags);
      const std::string stem = std::string(to_string(method));
      idx::write_file(out_dir / (stem + ".png"), encode_png(grid.canvas));
      const std::string manifest = manifest_json(grid.manifest).dump(2) + "\n";
      idx::write_file(out_dir / (stem + ".json"),
                      std::span(reinterpret_cast<const std::uint8_t*>(manifest.data()), manifest.size()));
      std::cout << "wrote " << (out_dir / (stem + ".png")).string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
