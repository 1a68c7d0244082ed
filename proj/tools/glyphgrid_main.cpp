#include <cstdio>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "glyphgrid/corpus.hpp"
#include "glyphgrid/dataset.hpp"
#include "glyphgrid/errors.hpp"
#include "glyphgrid/model_io.hpp"
#include "glyphgrid/png_io.hpp"
#include "glyphgrid/run_config.hpp"
#include "glyphgrid/sweep.hpp"
#include "glyphgrid/train.hpp"

namespace {

using glyphgrid::RunConfig;
using nlohmann::json;

// Every subcommand takes --config (a run-config JSON file) plus individual
// flags; explicitly passed flags win over file values. Each flag group
// binds CLI11 options to locals and merges only the options that were
// actually counted on the command line.
struct ConfigFlag {
  std::string path;
  CLI::Option* opt = nullptr;

  void attach(CLI::App& cmd) {
    opt = cmd.add_option("--config", path, "Run config JSON file; flags override its values");
  }
  RunConfig load() const {
    return opt->count() ? glyphgrid::load_run_config(path) : RunConfig{};
  }
};

struct LayoutFlags {
  int image_size = 0;
  int grid = 0;
  int cut = 0;
  std::string segmentation;
  std::string font;
  CLI::Option *o_image = nullptr, *o_grid = nullptr, *o_cut = nullptr, *o_seg = nullptr,
              *o_font = nullptr;

  void attach(CLI::App& cmd) {
    o_image = cmd.add_option("--image-size", image_size, "Output image side in pixels");
    o_grid = cmd.add_option("--grid", grid, "Cells per row/column");
    o_cut = cmd.add_option("--cut-length", cut, "Grapheme slots per image (grid^2)");
    o_seg = cmd.add_option("--segment", segmentation, "Segmentation: char or word");
    o_font = cmd.add_option("--font", font, "TrueType font file");
  }
  void apply(RunConfig& config) const {
    if (o_image->count()) config.layout.image_size = image_size;
    if (o_grid->count()) {
      config.layout.grid_dim = grid;
      // Convenience: --grid alone implies the matching cut length.
      if (!o_cut->count()) config.layout.cut_length = grid * grid;
    }
    if (o_cut->count()) config.layout.cut_length = cut;
    if (o_seg->count()) config.layout.segmentation = glyphgrid::segmentation_from_string(segmentation);
    if (o_font->count()) config.layout.font_path = font;
  }
};

struct ModelFlags {
  std::vector<int> channels;
  int classes = 0;
  std::uint64_t seed = 0;
  CLI::Option *o_channels = nullptr, *o_classes = nullptr, *o_seed = nullptr;

  void attach(CLI::App& cmd, bool with_classes = true) {
    o_channels = cmd.add_option("--channels", channels, "Conv block output channels, e.g. 8,16,32")
                     ->delimiter(',');
    if (with_classes) o_classes = cmd.add_option("--classes", classes, "Number of classes K");
    o_seed = cmd.add_option("--model-seed", seed, "Parameter init seed");
  }
  void apply(RunConfig& config) const {
    if (o_channels->count()) config.model.conv_channels = channels;
    if (o_classes && o_classes->count()) config.model.num_classes = classes;
    if (o_seed->count()) config.model.seed = seed;
  }
};

struct TrainFlags {
  double lr = 0.0;
  double momentum = 0.0;
  int batch = 0;
  int epochs = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  CLI::Option *o_lr = nullptr, *o_momentum = nullptr, *o_batch = nullptr, *o_epochs = nullptr,
              *o_seed = nullptr, *o_threads = nullptr;

  void attach(CLI::App& cmd) {
    o_lr = cmd.add_option("--lr", lr, "Learning rate");
    o_momentum = cmd.add_option("--momentum", momentum, "SGD momentum in [0,1)");
    o_batch = cmd.add_option("--batch", batch, "Mini-batch size");
    o_epochs = cmd.add_option("--epochs", epochs, "Training epochs");
    o_seed = cmd.add_option("--seed", seed, "Shuffle seed");
    o_threads = cmd.add_option("--threads", threads, "Worker threads (0 = hardware)");
  }
  void apply(RunConfig& config) const {
    if (o_lr->count()) config.train.learning_rate = lr;
    if (o_momentum->count()) config.train.momentum = momentum;
    if (o_batch->count()) config.train.batch_size = batch;
    if (o_epochs->count()) config.train.epochs = epochs;
    if (o_seed->count()) config.train.seed = seed;
    if (o_threads->count()) config.train.threads = threads;
  }
};

std::string read_stdin() {
  return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
}

json stats_json(const glyphgrid::LengthStats& stats) {
  return {{"count", stats.count}, {"max", stats.max},   {"mean", stats.mean},
          {"median", stats.median}, {"p50", stats.p50}, {"p90", stats.p90},
          {"p99", stats.p99}};
}

json eval_json(const glyphgrid::EvalResult& result) {
  json confusion = json::array();
  for (Eigen::Index i = 0; i < result.confusion.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < result.confusion.cols(); ++j) row.push_back(result.confusion(i, j));
    confusion.push_back(std::move(row));
  }
  return {{"accuracy", result.accuracy}, {"confusion", std::move(confusion)}, {"total", result.total}};
}

void setup_render(CLI::App& app) {
  auto cmd = app.add_subcommand("render", "Render one text into a glyph-grid PNG");
  auto config_flag = std::make_shared<ConfigFlag>();
  auto layout = std::make_shared<LayoutFlags>();
  auto text = std::make_shared<std::string>();
  auto use_stdin = std::make_shared<bool>(false);
  auto out = std::make_shared<std::string>("out.png");

  config_flag->attach(*cmd);
  layout->attach(*cmd);
  auto* text_opt = cmd->add_option("--text", *text, "Text to render");
  cmd->add_flag("--stdin", *use_stdin, "Read the text from standard input");
  cmd->add_option("--out", *out, "Output PNG path");
  text_opt->excludes("--stdin");

  cmd->callback([=] {
    RunConfig config = config_flag->load();
    layout->apply(config);
    config.layout.validate();
    if (*use_stdin) *text = read_stdin();

    const glyphgrid::Font font = glyphgrid::Font::load(config.layout.font_path);
    const glyphgrid::ImageU8 image =
        glyphgrid::render(glyphgrid::plan_layout(*text, config.layout), font, config.layout);
    glyphgrid::write_png(*out, image);
    std::cout << *out << '\n';
  });
}

void setup_stats(CLI::App& app) {
  auto cmd = app.add_subcommand("stats", "Corpus length statistics and a suggested grid");
  auto config_flag = std::make_shared<ConfigFlag>();
  auto csv = std::make_shared<std::string>();
  auto classes = std::make_shared<int>(0);
  auto columns = std::make_shared<std::string>();
  auto grids = std::make_shared<std::vector<int>>();
  auto o = std::make_shared<std::vector<CLI::Option*>>();

  config_flag->attach(*cmd);
  o->push_back(cmd->add_option("--csv", *csv, "Labeled corpus CSV"));
  o->push_back(cmd->add_option("--classes", *classes, "Number of classes K"));
  o->push_back(cmd->add_option("--columns", *columns, "Text columns, 1-based after the label"));
  o->push_back(cmd->add_option("--grids", *grids, "Candidate grid dims")->delimiter(','));

  cmd->callback([=] {
    RunConfig config = config_flag->load();
    if ((*o)[0]->count()) config.csv = *csv;
    if ((*o)[1]->count()) config.model.num_classes = *classes;
    if ((*o)[2]->count()) config.columns = *columns;
    std::vector<int> candidates = (*o)[3]->count() ? *grids : std::vector<int>{8, 14, 16, 28, 32};

    glyphgrid::LengthStatsAccumulator acc;
    glyphgrid::for_each_sample(config.csv, config.model.num_classes,
                               glyphgrid::ColumnSpec::parse(config.columns),
                               [&acc](glyphgrid::LabeledSample&& sample) { acc.add(sample.text); });
    const glyphgrid::LengthStats stats = acc.finish();
    const glyphgrid::GridChoice choice = glyphgrid::suggest_cut_length(stats, candidates);

    std::cout << json{{"stats", stats_json(stats)},
                      {"suggested", {{"cut_length", choice.cut_length}, {"grid_dim", choice.grid_dim}}}}
                     .dump(2)
              << '\n';
  });
}

void setup_build(CLI::App& app) {
  auto cmd = app.add_subcommand("build", "Render a labeled CSV into an image dataset");
  auto config_flag = std::make_shared<ConfigFlag>();
  auto layout = std::make_shared<LayoutFlags>();
  auto model = std::make_shared<ModelFlags>();
  auto csv = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto columns = std::make_shared<std::string>();
  auto split = std::make_shared<std::string>("train");
  auto o = std::make_shared<std::vector<CLI::Option*>>();

  config_flag->attach(*cmd);
  layout->attach(*cmd);
  model->attach(*cmd);
  o->push_back(cmd->add_option("--csv", *csv, "Labeled corpus CSV"));
  o->push_back(cmd->add_option("--out", *out, "Dataset output directory"));
  o->push_back(cmd->add_option("--columns", *columns, "Text columns, 1-based after the label"));
  cmd->add_option("--split", *split, "Split name (default train)");

  cmd->callback([=] {
    RunConfig config = config_flag->load();
    layout->apply(config);
    model->apply(config);
    if ((*o)[0]->count()) config.csv = *csv;
    if ((*o)[1]->count()) config.out_dir = *out;
    if ((*o)[2]->count()) config.columns = *columns;
    config.layout.validate();
    if (config.model.num_classes < 2) throw glyphgrid::ConfigError("--classes is required");

    const glyphgrid::Font font = glyphgrid::Font::load(config.layout.font_path);
    glyphgrid::build_dataset_csv(config.csv, config.model.num_classes,
                                 glyphgrid::ColumnSpec::parse(config.columns), config.layout, font,
                                 config.out_dir, *split);
    std::cout << (config.out_dir / "manifest.json").string() << '\n';
  });
}

void setup_train(CLI::App& app) {
  auto cmd = app.add_subcommand("train", "Train a CNN on a rendered dataset");
  auto config_flag = std::make_shared<ConfigFlag>();
  auto model = std::make_shared<ModelFlags>();
  auto train_flags = std::make_shared<TrainFlags>();
  auto manifest = std::make_shared<std::string>();
  auto model_out = std::make_shared<std::string>();
  auto split = std::make_shared<std::string>("train");

  config_flag->attach(*cmd);
  model->attach(*cmd, /*with_classes=*/false);  // classes come from the manifest
  train_flags->attach(*cmd);
  cmd->add_option("--manifest", *manifest, "Dataset manifest.json")->required();
  cmd->add_option("--model-out", *model_out, "Where to write the trained model")->required();
  cmd->add_option("--split", *split, "Split to train on (default train)");

  cmd->callback([=] {
    RunConfig config = config_flag->load();
    model->apply(config);
    train_flags->apply(config);

    const glyphgrid::DatasetManifest ds = glyphgrid::load_manifest(*manifest);
    glyphgrid::ModelConfig model_config = config.model;
    model_config.input_side = ds.config.image_size;
    model_config.num_classes = ds.num_classes;
    model_config.validate();
    config.train.validate();

    const glyphgrid::LoadedDataset data = glyphgrid::load_split(*manifest, *split);
    glyphgrid::TrainResult result =
        glyphgrid::train(glyphgrid::init_model(model_config), data, config.train, &std::cout);
    glyphgrid::save_model(result.model, *model_out);
    std::cout << json{{"model", *model_out},
                      {"train_accuracy", result.log.back().accuracy},
                      {"train_loss", result.log.back().loss}}
                     .dump()
              << '\n';
  });
}

void setup_eval(CLI::App& app) {
  auto cmd = app.add_subcommand("eval", "Evaluate a model on a dataset split");
  auto manifest = std::make_shared<std::string>();
  auto model_path = std::make_shared<std::string>();
  auto split = std::make_shared<std::string>("test");
  auto threads = std::make_shared<unsigned>(0);

  cmd->add_option("--manifest", *manifest, "Dataset manifest.json")->required();
  cmd->add_option("--model", *model_path, "Trained model file")->required();
  cmd->add_option("--split", *split, "Split to evaluate (default test)");
  cmd->add_option("--threads", *threads, "Worker threads (0 = hardware)");

  cmd->callback([=] {
    const glyphgrid::Model model = glyphgrid::load_model(*model_path);
    const glyphgrid::LoadedDataset data = glyphgrid::load_split(*manifest, *split);
    std::cout << eval_json(glyphgrid::evaluate(model, data, *threads)).dump(2) << '\n';
  });
}

void setup_predict(CLI::App& app) {
  auto cmd = app.add_subcommand("predict", "Classify one text with a trained model");
  auto config_flag = std::make_shared<ConfigFlag>();
  auto layout = std::make_shared<LayoutFlags>();
  auto model_path = std::make_shared<std::string>();
  auto text = std::make_shared<std::string>();
  auto use_stdin = std::make_shared<bool>(false);
  auto force = std::make_shared<bool>(false);

  config_flag->attach(*cmd);
  layout->attach(*cmd);
  cmd->add_option("--model", *model_path, "Trained model file")->required();
  auto* text_opt = cmd->add_option("--text", *text, "Text to classify");
  cmd->add_flag("--stdin", *use_stdin, "Read the text from standard input");
  cmd->add_flag("--force", *force, "Skip the layout/font vs model hash check");
  text_opt->excludes("--stdin");

  cmd->callback([=] {
    RunConfig config = config_flag->load();
    layout->apply(config);
    config.layout.validate();
    if (*use_stdin) *text = read_stdin();

    const glyphgrid::Model model = glyphgrid::load_model(*model_path);
    const glyphgrid::Font font = glyphgrid::Font::load(config.layout.font_path);
    const glyphgrid::Prediction prediction =
        glyphgrid::predict(model, *text, config.layout, font, *force);

    json probs = json::array();
    for (Eigen::Index k = 0; k < prediction.probs.data.size(); ++k) {
      probs.push_back(prediction.probs.data[k]);
    }
    std::cout << json{{"class_id", prediction.class_id},
                      {"label", prediction.class_id + 1},
                      {"probs", std::move(probs)}}
                     .dump()
              << '\n';
  });
}

void setup_sweep(CLI::App& app) {
  auto cmd = app.add_subcommand("sweep", "Compare cut lengths: build+train+eval per grid");
  auto config_flag = std::make_shared<ConfigFlag>();
  auto layout = std::make_shared<LayoutFlags>();
  auto model = std::make_shared<ModelFlags>();
  auto train_flags = std::make_shared<TrainFlags>();
  auto csv = std::make_shared<std::string>();
  auto test_csv = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto columns = std::make_shared<std::string>();
  auto grids = std::make_shared<std::vector<int>>();
  auto holdout = std::make_shared<int>(5);
  auto o = std::make_shared<std::vector<CLI::Option*>>();

  config_flag->attach(*cmd);
  layout->attach(*cmd);
  model->attach(*cmd);
  train_flags->attach(*cmd);
  cmd->add_option("--grids", *grids, "Candidate grid dims, e.g. 8,14,28")
      ->delimiter(',')
      ->required();
  o->push_back(cmd->add_option("--csv", *csv, "Labeled corpus CSV"));
  o->push_back(cmd->add_option("--test-csv", *test_csv, "Held-out CSV (default: modulo split)"));
  o->push_back(cmd->add_option("--out", *out, "Output directory for the per-grid datasets"));
  o->push_back(cmd->add_option("--columns", *columns, "Text columns, 1-based after the label"));
  cmd->add_option("--holdout-modulus", *holdout, "Without --test-csv, every n-th row is test data");

  cmd->callback([=] {
    glyphgrid::SweepOptions options;
    options.run = config_flag->load();
    layout->apply(options.run);
    model->apply(options.run);
    train_flags->apply(options.run);
    if ((*o)[0]->count()) options.run.csv = *csv;
    if ((*o)[1]->count()) options.run.test_csv = *test_csv;
    if ((*o)[2]->count()) options.run.out_dir = *out;
    if ((*o)[3]->count()) options.run.columns = *columns;
    options.grids = *grids;
    options.holdout_modulus = *holdout;
    options.font_path = options.run.layout.font_path;
    if (options.run.model.num_classes < 2) throw glyphgrid::ConfigError("--classes is required");
    options.run.train.validate();

    const std::vector<glyphgrid::SweepRow> rows = glyphgrid::run_sweep(options, &std::cerr);

    json table = json::array();
    for (const glyphgrid::SweepRow& row : rows) {
      table.push_back({{"accuracy", row.accuracy},
                       {"cut_length", row.cut_length},
                       {"grid_dim", row.grid_dim},
                       {"test_count", row.test_count},
                       {"train_accuracy", row.train_accuracy},
                       {"train_count", row.train_count}});
    }
    std::cout << table.dump(2) << '\n';

    std::fprintf(stderr, "%-6s %-6s %-10s %-10s %-8s %-8s\n", "grid", "cut", "train_acc",
                 "test_acc", "n_train", "n_test");
    for (const glyphgrid::SweepRow& row : rows) {
      std::fprintf(stderr, "%-6d %-6d %-10.4f %-10.4f %-8zu %-8zu\n", row.grid_dim,
                   row.cut_length, row.train_accuracy, row.accuracy, row.train_count,
                   row.test_count);
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"glyphgrid: draw text as glyph-grid images and classify them with a small CNN"};
  app.require_subcommand(1);
  setup_render(app);
  setup_stats(app);
  setup_build(app);
  setup_train(app);
  setup_eval(app);
  setup_predict(app);
  setup_sweep(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);        // prints help or the usage error
    return code == 0 ? 0 : 2;            // bad flags are config errors
  } catch (const glyphgrid::ConfigError& e) {
    std::cerr << "glyphgrid: " << e.what() << '\n';
    return 2;
  } catch (const glyphgrid::FontError& e) {
    std::cerr << "glyphgrid: " << e.what() << '\n';
    return 3;
  } catch (const glyphgrid::MismatchError& e) {
    std::cerr << "glyphgrid: " << e.what() << '\n';
    return 4;
  } catch (const glyphgrid::IoError& e) {
    std::cerr << "glyphgrid: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "glyphgrid: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
