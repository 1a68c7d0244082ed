#include "glyphgrid/sweep.hpp"

#include <ostream>

#include "glyphgrid/dataset.hpp"
#include "glyphgrid/errors.hpp"
#include "glyphgrid/train.hpp"

namespace glyphgrid {

std::vector<SweepRow> run_sweep(const SweepOptions& options, std::ostream* progress) {
  if (options.grids.size() < 2) {
    throw ConfigError("sweep needs at least 2 candidate grids");
  }

  const RunConfig& run = options.run;
  const ColumnSpec columns = ColumnSpec::parse(run.columns);
  const int num_classes = run.model.num_classes;

  Corpus train_corpus = read_csv(run.csv, num_classes, columns);
  Corpus test_corpus;
  if (!run.test_csv.empty()) {
    test_corpus = read_csv(run.test_csv, num_classes, columns);
  } else {
    // Deterministic holdout: every holdout_modulus-th row by index.
    if (options.holdout_modulus < 2) throw ConfigError("holdout modulus must be >= 2");
    Corpus remaining;
    remaining.name = train_corpus.name;
    remaining.num_classes = num_classes;
    test_corpus.name = train_corpus.name + "-holdout";
    test_corpus.num_classes = num_classes;
    for (std::size_t i = 0; i < train_corpus.samples.size(); ++i) {
      auto& target = (i % static_cast<std::size_t>(options.holdout_modulus) == 0) ? test_corpus
                                                                                  : remaining;
      target.samples.push_back(std::move(train_corpus.samples[i]));
    }
    train_corpus = std::move(remaining);
  }
  if (train_corpus.samples.empty() || test_corpus.samples.empty()) {
    throw MismatchError("sweep needs nonempty train and test data");
  }

  const Font font = Font::load(options.font_path);

  std::vector<SweepRow> rows;
  for (int grid : options.grids) {
    LayoutConfig layout = run.layout;
    layout.grid_dim = grid;
    layout.cut_length = grid * grid;
    layout.validate();

    const std::filesystem::path dataset_dir = run.out_dir / ("grid" + std::to_string(grid));
    if (progress) {
      *progress << "[sweep] grid " << grid << ": building " << dataset_dir.string() << '\n';
    }
    build_dataset(train_corpus, layout, font, dataset_dir, "train");
    build_dataset(test_corpus, layout, font, dataset_dir, "test");

    const std::filesystem::path manifest_path = dataset_dir / "manifest.json";
    const LoadedDataset train_data = load_split(manifest_path, "train");
    const LoadedDataset test_data = load_split(manifest_path, "test");

    ModelConfig model_config = run.model;
    model_config.input_side = layout.image_size;
    model_config.validate();

    if (progress) *progress << "[sweep] grid " << grid << ": training\n";
    TrainResult trained = train(init_model(model_config), train_data, run.train, progress);
    const EvalResult eval = evaluate(trained.model, test_data, run.train.threads);

    SweepRow row;
    row.grid_dim = grid;
    row.cut_length = layout.cut_length;
    row.accuracy = eval.accuracy;
    row.train_accuracy = trained.log.back().accuracy;
    row.train_count = train_data.images.size();
    row.test_count = test_data.images.size();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace glyphgrid
