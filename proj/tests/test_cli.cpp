#include "cli.hpp"
#include "support/png_decode.hpp"
#include "support/test_support.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace hwaug;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hwaug_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_images(const std::string& name, const std::vector<GrayImage>& images) const {
    idx::write_file(path(name), idx::write_images(images));
    return path(name);
  }

  std::string write_digits(std::size_t count, std::uint64_t seed = 1) const {
    return write_images("in.idx", hwaug::testing::synthetic_digits(count, seed));
  }

  static std::vector<std::uint8_t> bytes(const std::string& p) { return idx::read_file(p); }

  fs::path dir_;
};

} // namespace

TEST_F(CliTest, AugmentZeroApplyProbCopiesInput) {
  const auto in = write_digits(30);
  const auto r = run({"augment", "--images", in, "--method", "lineerase", "--mode", "x", "--seed", "7",
                      "--apply-prob", "0", "--out", path("o.idx")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(bytes(path("o.idx")), bytes(in));
  EXPECT_NE(r.out.find("processed=30 modified=0 seed=7 method=lineerase mode=x"), std::string::npos) << r.out;
}

TEST_F(CliTest, AugmentIsDeterministicAcrossRunsAndThreads) {
  const auto in = write_digits(120);
  std::vector<std::string> base = {"augment", "--images", in, "--method", "thick", "--mode", "random", "--seed", "3"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
  };
  ASSERT_EQ(run(with({"--out", path("a.idx")})).code, 0);
  ASSERT_EQ(run(with({"--out", path("b.idx")})).code, 0);
  ASSERT_EQ(run(with({"--out", path("c.idx"), "--threads", "4"})).code, 0);
  EXPECT_EQ(bytes(path("a.idx")), bytes(path("b.idx")));
  EXPECT_EQ(bytes(path("a.idx")), bytes(path("c.idx")));
  EXPECT_NE(bytes(path("a.idx")), bytes(in));
}

TEST_F(CliTest, AugmentRowProbSweepAccepted) {
  const auto in = write_digits(20);
  const auto r = run({"augment", "--images", in, "--method", "thin", "--mode", "random", "--row-prob", "0.2",
                      "--out", path("o.idx"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = nlohmann::json::parse(r.out);
  EXPECT_EQ(summary["processed"], 20);
  EXPECT_EQ(summary["method"], "thin");
  EXPECT_EQ(summary["mode"], "random");
  EXPECT_EQ(summary["seed"], 0);
  EXPECT_TRUE(summary.contains("modified"));
}

TEST_F(CliTest, AugmentDefaultModes) {
  const auto in = write_digits(5);
  auto r = run({"augment", "--images", in, "--method", "elongate", "--out", path("o.idx")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mode=x"), std::string::npos);
  r = run({"augment", "--images", in, "--method", "thick", "--out", path("o.idx")});
  EXPECT_NE(r.out.find("mode=complete"), std::string::npos);
}

TEST_F(CliTest, AugmentLabelsPassThrough) {
  const auto in = write_digits(4);
  idx::write_file(path("l.idx"), idx::write_labels(std::vector<std::uint32_t>{1, 2, 3, 4}));
  auto r = run({"augment", "--images", in, "--labels", path("l.idx"), "--method", "thin", "--out", path("o.idx"),
                "--out-labels", path("ol.idx")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(bytes(path("ol.idx")), bytes(path("l.idx")));

  idx::write_file(path("l3.idx"), idx::write_labels(std::vector<std::uint32_t>{1, 2, 3}));
  r = run({"augment", "--images", in, "--labels", path("l3.idx"), "--method", "thin", "--out", path("o.idx")});
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, AugmentValidationErrors) {
  const auto in = write_digits(4);
  EXPECT_EQ(run({"augment", "--images", in, "--method", "blur", "--out", path("o.idx")}).code, 2);
  EXPECT_EQ(run({"augment", "--images", in, "--method", "thick", "--mode", "x", "--out", path("o.idx")}).code, 2);
  EXPECT_EQ(run({"augment", "--images", in, "--method", "thick", "--apply-prob", "1.5", "--out", path("o.idx")}).code,
            2);
  EXPECT_EQ(run({"augment", "--images", in, "--method", "thick", "--k", "0", "--out", path("o.idx")}).code, 2);
  EXPECT_EQ(run({"augment", "--images", in, "--out", path("o.idx")}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
}

TEST_F(CliTest, ParseErrorNamesFileAndOffset) {
  auto data = idx::write_images(hwaug::testing::synthetic_digits(2, 1));
  data.resize(data.size() - 5);
  idx::write_file(path("trunc.idx"), data);
  const auto r = run({"augment", "--images", path("trunc.idx"), "--method", "thin", "--out", path("o.idx")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("trunc.idx"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("byte offset " + std::to_string(data.size())), std::string::npos) << r.err;
}

TEST_F(CliTest, MissingFileIsIoError) {
  EXPECT_EQ(run({"augment", "--images", path("nope.idx"), "--method", "thin", "--out", path("o.idx")}).code, 1);
  EXPECT_EQ(run({"info", path("nope.idx")}).code, 1);
}

TEST_F(CliTest, GridWritesPngAndManifest) {
  const auto images = hwaug::testing::synthetic_digits(12, 2);
  const auto in = write_images("in.idx", images);
  const auto r = run({"grid", "--images", in, "--count", "10", "--rows", "2", "--cols", "5", "--scale", "2",
                      "--out", path("g.png"), "--manifest", path("g.json"), "--tag", "original"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto png = hwaug::testing::decode_png(bytes(path("g.png")));
  EXPECT_EQ(png.width, 5u * (56 + 1) + 1);
  EXPECT_EQ(png.height, 2u * (56 + 1) + 1);
  std::ifstream mf(path("g.json"));
  const auto manifest = nlohmann::json::parse(mf);
  ASSERT_EQ(manifest.size(), 10u);
  EXPECT_EQ(manifest[9]["cell"], 10);
  EXPECT_EQ(manifest[9]["source_index"], 9);
  EXPECT_EQ(manifest[0]["tag"], "original");
}

TEST_F(CliTest, GridIndices) {
  const auto images = hwaug::testing::synthetic_digits(12, 2);
  const auto in = write_images("in.idx", images);
  auto r = run({"grid", "--images", in, "--indices", "11,3", "--out", path("g.png"), "--manifest", path("g.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream mf(path("g.json"));
  const auto manifest = nlohmann::json::parse(mf);
  EXPECT_EQ(manifest[0]["source_index"], 11);
  EXPECT_EQ(manifest[1]["source_index"], 3);

  r = run({"grid", "--images", in, "--indices", "3,12", "--out", path("g.png")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("out of range"), std::string::npos) << r.err;
}

TEST_F(CliTest, GridEdgeCases) {
  const auto in = write_digits(5);
  auto r = run({"grid", "--images", in, "--count", "0", "--scale", "1", "--out", path("g.png")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto png = hwaug::testing::decode_png(bytes(path("g.png")));
  EXPECT_EQ(png.width, 30u);
  EXPECT_EQ(run({"grid", "--images", in, "--count", "6", "--out", path("g.png")}).code, 2);
  EXPECT_EQ(run({"grid", "--images", in, "--count", "5", "--rows", "1", "--cols", "2", "--out", path("g.png")}).code,
            2);
}

TEST_F(CliTest, StatsZeroAndThick) {
  const auto zeros = write_images("z.idx", std::vector<GrayImage>(4, GrayImage(28, 28)));
  auto r = run({"stats", "--images", zeros, "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["count"], 4);
  EXPECT_EQ(j["height"], 28);
  EXPECT_EQ(j["mean_ink_sum"], 0.0);

  const auto in = write_digits(50);
  ASSERT_EQ(run({"augment", "--images", in, "--method", "thick", "--apply-prob", "1", "--out", path("t.idx")}).code, 0);
  const auto before = nlohmann::json::parse(run({"stats", "--images", in, "--json"}).out);
  const auto after = nlohmann::json::parse(run({"stats", "--images", path("t.idx"), "--json"}).out);
  EXPECT_GT(after["mean_nonzero"].get<double>(), before["mean_nonzero"].get<double>());
}

TEST_F(CliTest, StatsPerImage) {
  const auto in = write_images("in.idx", {GrayImage(2, 1, {5, 255}), GrayImage(2, 1)});
  const auto r = run({"stats", "--images", in, "--per-image"});
  ASSERT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string first;
  std::getline(lines, first);
  const auto j = nlohmann::json::parse(first);
  EXPECT_EQ(j["nonzero"], 2);
  EXPECT_EQ(j["ink_sum"], 260);
}

TEST_F(CliTest, Info) {
  const auto in = write_digits(3);
  auto r = run({"info", in, "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["rank"], 3);
  EXPECT_EQ(j["extents"], nlohmann::json::array({3, 28, 28}));
  EXPECT_EQ(j["magic"], "0x00000803");

  idx::write_file(path("l.idx"), idx::write_labels(std::vector<std::uint32_t>{1, 2}));
  r = run({"info", path("l.idx")});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rank: 1"), std::string::npos);

  idx::write_file(path("x.gz"), std::vector<std::uint8_t>{0x1F, 0x8B, 8, 0, 0, 0, 0, 0, 0, 3});
  r = run({"info", path("x.gz")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("gzip"), std::string::npos);
}

// Pinned output hashes for fixed seeds; any change to kernel or stream
// semantics shows up here.
TEST_F(CliTest, GoldenHashes) {
  const auto in = write_digits(64, 11);
  const std::vector<std::pair<std::vector<std::string>, std::uint64_t>> cases = {
      {{"--method", "thick", "--mode", "complete", "--seed", "1"}, 0xe359de2e14f6f878ULL},
      {{"--method", "thin", "--mode", "random", "--seed", "2"}, 0x20d4626fa6a2c6a9ULL},
      {{"--method", "elongate", "--mode", "y", "--seed", "3"}, 0x9614f7090c9b920eULL},
      {{"--method", "lineerase", "--mode", "x", "--seed", "4"}, 0xc7cf87e32a9bf8a1ULL},
  };
  for (const auto& [flags, expected] : cases) {
    std::vector<std::string> args = {"augment", "--images", in, "--out", path("o.idx")};
    args.insert(args.end(), flags.begin(), flags.end());
    ASSERT_EQ(run(args).code, 0);
    const auto hash = hwaug::testing::fnv1a(bytes(path("o.idx")));
    EXPECT_EQ(hash, expected) << flags[1] << " 0x" << std::hex << hash;
  }
}
