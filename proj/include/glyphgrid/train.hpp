#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "glyphgrid/dataset.hpp"
#include "glyphgrid/nn.hpp"

namespace glyphgrid {

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  int batch_size = 32;
  int epochs = 10;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;  // throws ConfigError
};

// A split pulled fully into memory. Images stay 8-bit and are normalized
// per forward pass; labels are shifted to 0-based here and only here.
struct LoadedDataset {
  std::vector<ImageU8> images;
  std::vector<int> labels;
  int num_classes = 0;
  int image_side = 0;
  std::string config_hash;
};

// Reads every image of one manifest split (manifest_path's directory is the
// dataset root). Throws MismatchError for a missing/empty split, wrong image
// sizes, or out-of-range labels; IoError for unreadable files.
LoadedDataset load_split(const std::filesystem::path& manifest_path, const std::string& split);

struct EpochLog {
  int epoch = 0;  // 1-based
  double loss = 0.0;
  double accuracy = 0.0;
  std::int64_t wall_ms = 0;
};

struct TrainResult {
  Model model;
  std::vector<EpochLog> log;
};

// Mini-batch SGD with momentum (v = m*v + g_mean; w -= lr*v), sample order
// reshuffled each epoch by one seeded stream. Loss/accuracy are the running
// training metrics of the epoch. Per-sample gradients may be computed in
// parallel but are reduced in sample order, so a seed fixes the whole
// trajectory. When log_stream is given, each epoch emits one JSON line
// {"accuracy":..,"epoch":..,"loss":..,"wall_ms":..}.
TrainResult train(Model model, const LoadedDataset& data, const TrainConfig& config,
                  std::ostream* log_stream = nullptr);

struct EvalResult {
  double accuracy = 0.0;
  Eigen::MatrixXi confusion;  // [K,K], row = true class, col = predicted
  std::size_t total = 0;
};

// Throws MismatchError when the dataset hash differs from the one the model
// was trained against, or when shapes/classes disagree.
EvalResult evaluate(const Model& model, const LoadedDataset& data, unsigned threads = 0);

struct Prediction {
  int class_id = 0;  // 0-based argmax
  Tensor probs;      // [K]
};

// Render one text with the given layout and font, then run the forward
// pass. The layout+font must hash to the model's training dataset hash
// unless allow_mismatch is set.
Prediction predict(const Model& model, std::string_view text, const LayoutConfig& layout,
                   const Font& font, bool allow_mismatch = false);

}  // namespace glyphgrid
