#include "glyphgrid/sweep.hpp"

#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "glyphgrid/errors.hpp"
#include "glyphgrid/rng.hpp"
#include "glyphgrid/run_config.hpp"
#include "support/gen.hpp"
#include "support/paths.hpp"
#include "support/tempdir.hpp"

using namespace glyphgrid;
using testsupport::TempDir;

namespace {

// 2-class corpus with disjoint inventories, short texts.
void write_toy_csv(const std::filesystem::path& path, int rows, std::uint64_t seed) {
  const std::vector<char32_t> a = decode_utf8("一二三四五");
  const std::vector<char32_t> b = decode_utf8("天地人日月");
  Xoshiro256ss rng(seed);
  std::ofstream out(path);
  for (int i = 0; i < rows; ++i) {
    const int label = 1 + i % 2;
    out << label << ',' << testsupport::random_text(rng, label == 1 ? a : b, 3, 9) << '\n';
  }
}

SweepOptions toy_options(const TempDir& tmp, const std::filesystem::path& csv) {
  SweepOptions options;
  options.grids = {4, 8};
  options.holdout_modulus = 4;
  options.font_path = testsupport::test_font();
  options.run.csv = csv;
  options.run.out_dir = tmp / "sweep-out";
  options.run.layout.image_size = 32;
  options.run.model.num_classes = 2;
  options.run.model.conv_channels = {4};
  options.run.model.seed = 1;
  options.run.train.epochs = 2;
  options.run.train.batch_size = 8;
  options.run.train.seed = 1;
  return options;
}

}  // namespace

TEST_SUITE("sweep") {
  TEST_CASE("run config loads every section and rejects unknown keys") {
    TempDir tmp("runconfig");
    const std::filesystem::path path = tmp / "run.json";
    std::ofstream(path) << nlohmann::json{
        {"layout",
         {{"image_size", 112},
          {"grid_dim", 14},
          {"cut_length", 196},
          {"segmentation", "word"},
          {"font", "fonts/x.ttf"}}},
        {"model", {{"conv_channels", {4, 8}}, {"num_classes", 5}, {"seed", 9}}},
        {"train",
         {{"learning_rate", 0.02},
          {"momentum", 0.8},
          {"batch_size", 16},
          {"epochs", 3},
          {"seed", 7},
          {"threads", 2}}},
        {"paths", {{"csv", "a.csv"}, {"test_csv", "b.csv"}, {"out", "datadir"}}},
        {"columns", "2,1"}}.dump();

    const RunConfig config = load_run_config(path);
    CHECK(config.layout.image_size == 112);
    CHECK(config.layout.grid_dim == 14);
    CHECK(config.layout.cut_length == 196);
    CHECK(config.layout.segmentation == Segmentation::word_level);
    CHECK(config.layout.font_path == "fonts/x.ttf");
    CHECK(config.model.conv_channels == std::vector<int>{4, 8});
    CHECK(config.model.num_classes == 5);
    CHECK(config.model.seed == 9);
    CHECK(config.train.learning_rate == 0.02);
    CHECK(config.train.momentum == 0.8);
    CHECK(config.train.batch_size == 16);
    CHECK(config.train.epochs == 3);
    CHECK(config.train.seed == 7);
    CHECK(config.train.threads == 2);
    CHECK(config.csv == "a.csv");
    CHECK(config.test_csv == "b.csv");
    CHECK(config.out_dir == "datadir");
    CHECK(config.columns == "2,1");

    // resolved_model picks the image size up as the input side.
    const ModelConfig resolved = config.resolved_model();
    CHECK(resolved.input_side == 112);
    CHECK(resolved.num_classes == 5);

    std::ofstream(path, std::ios::trunc) << R"({"layout": {"imagesize": 64}})";
    CHECK_THROWS_AS(load_run_config(path), ConfigError);
    std::ofstream(path, std::ios::trunc) << R"({"misc": 1})";
    CHECK_THROWS_AS(load_run_config(path), ConfigError);
    std::ofstream(path, std::ios::trunc) << "{broken";
    CHECK_THROWS_AS(load_run_config(path), ConfigError);
    CHECK_THROWS_AS(load_run_config(tmp / "absent.json"), IoError);
  }

  TEST_CASE("shipped presets are valid run configs") {
    const std::filesystem::path presets = testsupport::source_dir() / "presets";
    struct Expect {
      const char* file;
      int image_size;
      int grid;
    };
    for (const Expect& expect : {Expect{"grid8.json", 224, 8}, Expect{"grid14.json", 224, 14},
                                 Expect{"grid28.json", 224, 28}, Expect{"toy64.json", 64, 8}}) {
      CAPTURE(expect.file);
      const RunConfig config = load_run_config(presets / expect.file);
      CHECK(config.layout.image_size == expect.image_size);
      CHECK(config.layout.grid_dim == expect.grid);
      CHECK(config.layout.cut_length == expect.grid * expect.grid);
      CHECK_NOTHROW(config.layout.validate());
      CHECK_NOTHROW(config.resolved_model());
      CHECK_NOTHROW(config.train.validate());
    }
  }

  TEST_CASE("sweep demands at least two candidate grids") {
    TempDir tmp("sweep");
    const std::filesystem::path csv = tmp / "toy.csv";
    write_toy_csv(csv, 24, 800);
    SweepOptions options = toy_options(tmp, csv);
    options.grids = {8};
    CHECK_THROWS_AS(run_sweep(options), ConfigError);
    options.grids = {4, 8};
    options.holdout_modulus = 1;
    CHECK_THROWS_AS(run_sweep(options), ConfigError);
  }

  TEST_CASE("sweep emits one fully populated row per grid, deterministically") {
    TempDir tmp("sweep");
    const std::filesystem::path csv = tmp / "toy.csv";
    write_toy_csv(csv, 24, 801);
    const SweepOptions options = toy_options(tmp, csv);

    const std::vector<SweepRow> rows = run_sweep(options);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].grid_dim == 4);
    CHECK(rows[0].cut_length == 16);
    CHECK(rows[1].grid_dim == 8);
    CHECK(rows[1].cut_length == 64);
    for (const SweepRow& row : rows) {
      // 24 rows, every 4th held out.
      CHECK(row.train_count == 18);
      CHECK(row.test_count == 6);
      CHECK(row.accuracy >= 0.0);
      CHECK(row.accuracy <= 1.0);
      CHECK(row.train_accuracy >= 0.0);
      CHECK(row.train_accuracy <= 1.0);
    }
    CHECK(std::filesystem::exists(tmp.path() / "sweep-out" / "grid4" / "manifest.json"));
    CHECK(std::filesystem::exists(tmp.path() / "sweep-out" / "grid8" / "manifest.json"));

    // Same seed, same corpus: identical accuracy columns on a re-run.
    const std::vector<SweepRow> again = run_sweep(options);
    REQUIRE(again.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(again[i].accuracy == rows[i].accuracy);
      CHECK(again[i].train_accuracy == rows[i].train_accuracy);
    }
  }

  TEST_CASE("an explicit test csv replaces the modulo holdout") {
    TempDir tmp("sweep");
    const std::filesystem::path train_csv = tmp / "train.csv";
    const std::filesystem::path test_csv = tmp / "test.csv";
    write_toy_csv(train_csv, 16, 802);
    write_toy_csv(test_csv, 4, 803);

    SweepOptions options = toy_options(tmp, train_csv);
    options.run.test_csv = test_csv;
    const std::vector<SweepRow> rows = run_sweep(options);
    for (const SweepRow& row : rows) {
      CHECK(row.train_count == 16);
      CHECK(row.test_count == 4);
    }
  }
}
