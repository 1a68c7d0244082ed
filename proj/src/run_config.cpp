#include "glyphgrid/run_config.hpp"

#include <fstream>

#include <json.hpp>

#include "glyphgrid/errors.hpp"

namespace glyphgrid {

namespace {

using nlohmann::json;

[[noreturn]] void unknown_key(const std::string& section, const std::string& key) {
  throw ConfigError("unknown config key '" + (section.empty() ? key : section + "." + key) + "'");
}

void apply_layout(const json& doc, LayoutConfig& layout) {
  for (const auto& [key, value] : doc.items()) {
    if (key == "image_size") layout.image_size = value.get<int>();
    else if (key == "grid_dim") layout.grid_dim = value.get<int>();
    else if (key == "cut_length") layout.cut_length = value.get<int>();
    else if (key == "segmentation") layout.segmentation = segmentation_from_string(value.get<std::string>());
    else if (key == "font") layout.font_path = value.get<std::string>();
    else unknown_key("layout", key);
  }
}

void apply_model(const json& doc, ModelConfig& model) {
  for (const auto& [key, value] : doc.items()) {
    if (key == "conv_channels") model.conv_channels = value.get<std::vector<int>>();
    else if (key == "num_classes") model.num_classes = value.get<int>();
    else if (key == "seed") model.seed = value.get<std::uint64_t>();
    else unknown_key("model", key);
  }
}

void apply_train(const json& doc, TrainConfig& train) {
  for (const auto& [key, value] : doc.items()) {
    if (key == "learning_rate") train.learning_rate = value.get<double>();
    else if (key == "momentum") train.momentum = value.get<double>();
    else if (key == "batch_size") train.batch_size = value.get<int>();
    else if (key == "epochs") train.epochs = value.get<int>();
    else if (key == "seed") train.seed = value.get<std::uint64_t>();
    else if (key == "threads") train.threads = value.get<unsigned>();
    else unknown_key("train", key);
  }
}

void apply_paths(const json& doc, RunConfig& config) {
  for (const auto& [key, value] : doc.items()) {
    if (key == "csv") config.csv = value.get<std::string>();
    else if (key == "test_csv") config.test_csv = value.get<std::string>();
    else if (key == "out") config.out_dir = value.get<std::string>();
    else unknown_key("paths", key);
  }
}

}  // namespace

ModelConfig RunConfig::resolved_model() const {
  ModelConfig resolved = model;
  resolved.input_side = layout.image_size;
  resolved.validate();
  return resolved;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }

  RunConfig config;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "layout") apply_layout(value, config.layout);
      else if (key == "model") apply_model(value, config.model);
      else if (key == "train") apply_train(value, config.train);
      else if (key == "paths") apply_paths(value, config);
      else if (key == "columns") config.columns = value.get<std::string>();
      else unknown_key("", key);
    }
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config;
}

}  // namespace glyphgrid
