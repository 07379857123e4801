#include "cli.hpp"

#include "hwaug/hwaug.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <sstream>

namespace hwaug::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Validation failure detected by the CLI itself (exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Attaches the file name to IDX parse errors.
struct FileError : std::runtime_error {
  FileError(const fs::path& file, const idx::Error& e)
      : std::runtime_error(file.string() + ": " + e.what() + " (at byte offset " + std::to_string(e.offset()) +
                           ")") {}
};

template <typename Fn>
auto with_file(const fs::path& file, Fn&& fn) {
  try {
    return fn();
  } catch (const idx::Error& e) {
    throw FileError(file, e);
  }
}

std::vector<GrayImage> load_images(const fs::path& file) {
  const auto bytes = idx::read_file(file);
  return with_file(file, [&] { return idx::read_images(bytes); });
}

std::vector<std::uint32_t> load_labels(const fs::path& file) {
  const auto bytes = idx::read_file(file);
  return with_file(file, [&] { return idx::read_labels(bytes); });
}

struct AugmentArgs {
  fs::path images;
  std::optional<fs::path> labels;
  fs::path out;
  std::optional<fs::path> out_labels;
  std::string method;
  std::optional<std::string> mode;
  std::uint64_t seed = 0;
  double apply_prob = 0.5;
  double row_prob = 0.5;
  int k = 10;
  int threshold = 10;
  unsigned threads = 1;
  bool json = false;
};

struct GridArgs {
  fs::path images;
  fs::path out;
  std::optional<fs::path> manifest;
  std::optional<std::size_t> count;
  std::vector<std::size_t> indices;
  std::optional<std::size_t> rows;
  std::optional<std::size_t> cols;
  std::size_t scale = 4;
  std::size_t border = 1;
  std::optional<std::string> tag;
};

struct StatsArgs {
  fs::path images;
  bool per_image = false;
  bool json = false;
};

struct InfoArgs {
  fs::path file;
  bool json = false;
};

int cmd_augment(const AugmentArgs& a, std::ostream& out) {
  PipelineConfig cfg;
  const auto method = parse_method(a.method);
  if (!method)
    throw UsageError("unknown method '" + a.method + "' (expected thick|thin|elongate|lineerase)");
  cfg.augment.method = *method;
  if (a.mode) {
    const auto mode = parse_mode(*a.mode);
    if (!mode)
      throw UsageError("unknown mode '" + *a.mode + "' (expected complete|random|x|y)");
    cfg.augment.mode = *mode;
  } else {
    cfg.augment.mode = is_axis_method(*method) ? Mode::XAxis : Mode::Complete;
  }
  cfg.augment.threshold = a.threshold;
  cfg.augment.k = a.k;
  cfg.augment.row_prob = a.row_prob;
  cfg.apply_prob = a.apply_prob;
  cfg.base_seed = a.seed;
  cfg.validate();
  if (a.out_labels && !a.labels)
    throw UsageError("--out-labels requires --labels");

  const auto images = load_images(a.images);
  std::optional<std::vector<std::uint32_t>> labels;
  if (a.labels) {
    labels = load_labels(*a.labels);
    if (labels->size() != images.size())
      throw UsageError(a.labels->string() + ": " + std::to_string(labels->size()) + " labels but " +
                       a.images.string() + " holds " + std::to_string(images.size()) + " images");
  }
  if (images.empty())
    throw UsageError(a.images.string() + ": no images to augment");

  const auto outcome = augment_images(images, cfg, Schedule{std::max(1u, a.threads)});
  idx::write_file(a.out, idx::write_images(outcome.images));
  if (a.out_labels)
    idx::write_file(*a.out_labels, idx::write_labels(*labels));

  const std::size_t modified = outcome.applied_count();
  if (a.json) {
    json summary = {{"processed", outcome.images.size()},
                    {"modified", modified},
                    {"seed", cfg.base_seed},
                    {"method", to_string(cfg.augment.method)},
                    {"mode", to_string(cfg.augment.mode)},
                    {"out", a.out.string()}};
    if (a.out_labels)
      summary["out_labels"] = a.out_labels->string();
    out << summary.dump() << '\n';
  } else {
    out << "processed=" << outcome.images.size() << " modified=" << modified << " seed=" << cfg.base_seed
        << " method=" << to_string(cfg.augment.method) << " mode=" << to_string(cfg.augment.mode) << '\n';
  }
  return kExitOk;
}

int cmd_grid(const GridArgs& a, std::ostream& out) {
  const auto images = load_images(a.images);

  std::vector<std::size_t> picks = a.indices;
  if (picks.empty()) {
    const std::size_t count = a.count.value_or(std::min<std::size_t>(10, images.size()));
    if (count > images.size())
      throw UsageError("--count " + std::to_string(count) + " exceeds the " + std::to_string(images.size()) +
                       " images in " + a.images.string());
    picks.resize(count);
    for (std::size_t i = 0; i < count; ++i)
      picks[i] = i;
  } else {
    for (std::size_t i : picks)
      if (i >= images.size())
        throw UsageError("--indices: index " + std::to_string(i) + " out of range [0, " +
                         std::to_string(images.size()) + ") for " + a.images.string());
  }

  GridSpec spec;
  spec.scale = a.scale;
  spec.cell_border = a.border;
  spec.cols = a.cols.value_or(std::clamp<std::size_t>(picks.size(), 1, 10));
  if (spec.cols == 0)
    throw UsageError("--cols must be positive");
  spec.rows = a.rows.value_or(std::max<std::size_t>(1, (picks.size() + spec.cols - 1) / spec.cols));
  if (!images.empty()) {
    spec.cell_width = images.front().width();
    spec.cell_height = images.front().height();
  }

  std::vector<GrayImage> selected;
  selected.reserve(picks.size());
  for (std::size_t i : picks)
    selected.push_back(images[i]);
  std::vector<std::string> tags;
  if (a.tag)
    tags.assign(selected.size(), *a.tag);

  const RenderedGrid grid = render_grid(selected, spec, picks, tags);
  idx::write_file(a.out, encode_png(grid.canvas));
  if (a.manifest) {
    const std::string text = manifest_json(grid.manifest).dump(2) + "\n";
    idx::write_file(*a.manifest, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }
  out << "cells=" << selected.size() << " canvas=" << grid.canvas.width() << "x" << grid.canvas.height()
      << " png=" << a.out.string() << '\n';
  return kExitOk;
}

int cmd_stats(const StatsArgs& a, std::ostream& out) {
  const auto bytes = idx::read_file(a.images);
  const auto header = with_file(a.images, [&] { return idx::parse_header(bytes, idx::kRankImages); });
  const auto images = with_file(a.images, [&] { return idx::read_images(bytes); });
  const auto stats = ink_stats(images);

  double ink = 0.0;
  double nonzero = 0.0;
  for (const auto& s : stats) {
    ink += static_cast<double>(s.ink_sum);
    nonzero += static_cast<double>(s.nonzero);
  }
  const double n = stats.empty() ? 1.0 : static_cast<double>(stats.size());

  if (a.per_image) {
    for (std::size_t i = 0; i < stats.size(); ++i)
      out << json{{"index", i}, {"nonzero", stats[i].nonzero}, {"ink_sum", stats[i].ink_sum}}.dump() << '\n';
  }
  if (a.json) {
    out << json{{"count", images.size()},
                {"height", header.dims[1]},
                {"width", header.dims[2]},
                {"mean_ink_sum", ink / n},
                {"mean_nonzero", nonzero / n}}
               .dump()
        << '\n';
  } else {
    out << "count=" << images.size() << " dims=" << header.dims[1] << "x" << header.dims[2]
        << " mean_ink_sum=" << ink / n << " mean_nonzero=" << nonzero / n << '\n';
  }
  return kExitOk;
}

int cmd_info(const InfoArgs& a, std::ostream& out) {
  // Largest supported header: magic + three extents.
  const auto prefix = idx::read_file_prefix(a.file, 16);
  const auto header = with_file(a.file, [&] { return idx::parse_header(prefix); });

  std::ostringstream magic;
  magic << "0x" << std::hex << std::uppercase;
  for (auto b : header.magic)
    magic << (b < 0x10 ? "0" : "") << int{b};

  if (a.json) {
    out << json{{"magic", magic.str()}, {"type_code", header.type_code()}, {"rank", header.rank()},
                {"extents", header.dims}}
               .dump()
        << '\n';
  } else {
    out << "magic: " << magic.str() << "\ntype_code: 0x08\nrank: " << int{header.rank()} << "\nextents:";
    for (auto d : header.dims)
      out << ' ' << d;
    out << '\n';
  }
  return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stroke-level augmentation for handwritten character datasets in IDX format.\n"
               "Gzip-compressed IDX files are rejected; decompress them first (gunzip).",
               "hwaug"};
  app.require_subcommand(1);

  AugmentArgs aug;
  auto* augment = app.add_subcommand("augment", "Augment an IDX image file (labels pass through)");
  augment->add_option("--images", aug.images, "Input IDX image file")->required();
  augment->add_option("--labels", aug.labels, "Input IDX label file");
  augment->add_option("--out", aug.out, "Output IDX image file")->required();
  augment->add_option("--out-labels", aug.out_labels, "Output IDX label file");
  augment->add_option("--method", aug.method, "thick|thin|elongate|lineerase")->required();
  augment->add_option("--mode", aug.mode, "complete|random (thick, thin) or x|y (elongate, lineerase)");
  augment->add_option("--seed", aug.seed, "Base seed")->capture_default_str();
  augment->add_option("--apply-prob", aug.apply_prob, "Per-image augmentation probability")->capture_default_str();
  augment->add_option("--row-prob", aug.row_prob, "Per-row probability in random mode")->capture_default_str();
  augment->add_option("--k", aug.k, "Thick reduction limit: d drawn from [0, k)")->capture_default_str();
  augment->add_option("--threshold", aug.threshold, "Ink threshold (value > threshold is ink)")
      ->capture_default_str();
  augment->add_option("--threads", aug.threads, "Worker threads (output is identical for any value)")
      ->capture_default_str();
  augment->add_flag("--json", aug.json, "Print the summary as one JSON object");

  GridArgs grid;
  auto* grid_cmd = app.add_subcommand("grid", "Render a numbered sample sheet as PNG plus JSON manifest");
  grid_cmd->add_option("--images", grid.images, "Input IDX image file")->required();
  grid_cmd->add_option("--out", grid.out, "Output PNG file")->required();
  grid_cmd->add_option("--manifest", grid.manifest, "Output JSON manifest");
  grid_cmd->add_option("--count", grid.count, "Render the first N images (default min(10, total))");
  grid_cmd->add_option("--indices", grid.indices, "Explicit image indices")->delimiter(',');
  grid_cmd->add_option("--rows", grid.rows, "Grid rows");
  grid_cmd->add_option("--cols", grid.cols, "Grid columns");
  grid_cmd->add_option("--scale", grid.scale, "Nearest-neighbour magnification")->capture_default_str();
  grid_cmd->add_option("--border", grid.border, "Cell border width in pixels")->capture_default_str();
  grid_cmd->add_option("--tag", grid.tag, "Tag recorded for every cell in the manifest");
  grid_cmd->get_option("--indices")->excludes("--count");

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "Print ink statistics of an IDX image file");
  stats->add_option("--images", st.images, "Input IDX image file")->required();
  stats->add_flag("--per-image", st.per_image, "Also print one JSON line per image");
  stats->add_flag("--json", st.json, "Print the aggregate as JSON");

  InfoArgs info;
  auto* info_cmd = app.add_subcommand("info", "Print the IDX header without loading data");
  info_cmd->add_option("file,--images", info.file, "IDX file")->required();
  info_cmd->add_flag("--json", info.json, "Print as JSON");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "hwaug: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*augment)
      return cmd_augment(aug, out);
    if (*grid_cmd)
      return cmd_grid(grid, out);
    if (*stats)
      return cmd_stats(st, out);
    return cmd_info(info, out);
  } catch (const idx::IoError& e) {
    err << "hwaug: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FileError& e) {
    err << "hwaug: error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const idx::Error& e) {
    err << "hwaug: error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const RenderError& e) {
    err << "hwaug: error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "hwaug: error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const UsageError& e) {
    err << "hwaug: error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

} // namespace hwaug::cli
