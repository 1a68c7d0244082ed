#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "glyphgrid/corpus.hpp"
#include "glyphgrid/run_config.hpp"

namespace glyphgrid {

struct SweepRow {
  int grid_dim = 0;
  int cut_length = 0;
  double accuracy = 0.0;       // held-out accuracy
  double train_accuracy = 0.0; // final epoch, training split
  std::size_t train_count = 0;
  std::size_t test_count = 0;
};

struct SweepOptions {
  std::vector<int> grids;  // at least 2 candidates
  RunConfig run;           // layout.grid_dim/cut_length are overridden per candidate
  std::filesystem::path font_path;

  // Without a test CSV the corpus is split deterministically: every
  // holdout_modulus-th sample (by row index) becomes test data.
  int holdout_modulus = 5;
};

// Builds, trains, and evaluates one dataset per candidate grid, all from
// the same corpus, seed, and hyperparameters, so cut_length is the only
// varying factor. Datasets land in run.out_dir/grid<g>/. Per-epoch logs go
// to `progress` when given.
std::vector<SweepRow> run_sweep(const SweepOptions& options, std::ostream* progress = nullptr);

}  // namespace glyphgrid
