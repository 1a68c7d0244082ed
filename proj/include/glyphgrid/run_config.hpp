#pragma once

#include <filesystem>
#include <string>

#include "glyphgrid/layout.hpp"
#include "glyphgrid/nn.hpp"
#include "glyphgrid/train.hpp"

namespace glyphgrid {

// One JSON file describing a whole run: layout geometry, model
// architecture, training hyperparameters, and the file paths they act on.
// Every command loads the file first (when --config is given) and then lets
// explicit CLI flags override individual values. model.input_side is not a
// config key: it always follows layout.image_size.
struct RunConfig {
  LayoutConfig layout;
  ModelConfig model;
  TrainConfig train;

  std::filesystem::path csv;
  std::filesystem::path test_csv;
  std::filesystem::path out_dir = "out";
  std::string columns;  // 1-based text column spec, "" = all

  // Layout and model agree on the image side; throws ConfigError.
  ModelConfig resolved_model() const;
};

// Parses a config file over the defaults. Unknown sections or keys are
// ConfigErrors so typos fail loudly; a missing file is an IoError.
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace glyphgrid
