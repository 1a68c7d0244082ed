#include "glyphgrid/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <utility>

#include <json.hpp>

#include "glyphgrid/errors.hpp"
#include "glyphgrid/parallel.hpp"
#include "glyphgrid/png_io.hpp"
#include "glyphgrid/sha256.hpp"

namespace glyphgrid {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json config_json(const LayoutConfig& config, const std::string& font_sha256) {
  // json orders keys alphabetically, so dump() is canonical.
  return json{{"cut_length", config.cut_length},
              {"font_sha256", font_sha256},
              {"grid_dim", config.grid_dim},
              {"image_size", config.image_size},
              {"segmentation", to_string(config.segmentation)}};
}

json manifest_json(const DatasetManifest& manifest) {
  json splits = json::object();
  for (const auto& [name, split] : manifest.splits) {
    json per_class = json::object();
    for (const auto& [label, count] : split.per_class) per_class[std::to_string(label)] = count;
    json samples = json::array();
    for (const ManifestEntry& entry : split.samples) {
      samples.push_back(json{{"label", entry.label}, {"path", entry.path}});
    }
    splits[name] = json{{"per_class", std::move(per_class)},
                        {"sample_count", split.sample_count},
                        {"samples", std::move(samples)}};
  }
  return json{{"config", config_json(manifest.config, manifest.font_sha256)},
              {"config_hash", config_hash(manifest)},
              {"num_classes", manifest.num_classes},
              {"splits", std::move(splits)}};
}

DatasetManifest manifest_from_json(const json& doc) {
  DatasetManifest manifest;
  const json& config = doc.at("config");
  manifest.config.image_size = config.at("image_size").get<int>();
  manifest.config.grid_dim = config.at("grid_dim").get<int>();
  manifest.config.cut_length = config.at("cut_length").get<int>();
  manifest.config.segmentation = segmentation_from_string(config.at("segmentation").get<std::string>());
  manifest.font_sha256 = config.at("font_sha256").get<std::string>();
  manifest.num_classes = doc.at("num_classes").get<int>();
  for (const auto& [name, split_doc] : doc.at("splits").items()) {
    SplitManifest split;
    split.sample_count = split_doc.at("sample_count").get<std::size_t>();
    for (const auto& [label, count] : split_doc.at("per_class").items()) {
      split.per_class[std::stoi(label)] = count.get<std::size_t>();
    }
    for (const json& sample : split_doc.at("samples")) {
      split.samples.push_back({sample.at("path").get<std::string>(), sample.at("label").get<int>()});
    }
    manifest.splits[name] = std::move(split);
  }
  return manifest;
}

struct PendingSample {
  std::size_t index = 0;  // running index within the split
  int label = 0;
  std::string text;
};

// Renders and writes a batch in parallel; manifest entries keep batch order.
void flush_batch(std::vector<PendingSample>& batch, const LayoutConfig& config, const Font& font,
                 const fs::path& out_dir, const std::string& split_name, SplitManifest& split,
                 std::set<int>& dirs_made) {
  if (batch.empty()) return;
  for (const PendingSample& sample : batch) {
    if (dirs_made.insert(sample.label).second) {
      fs::create_directories(out_dir / split_name / std::to_string(sample.label));
    }
  }
  const std::size_t base = split.samples.size();
  split.samples.resize(base + batch.size());
  parallel_for(batch.size(), [&](std::size_t i) {
    const PendingSample& sample = batch[i];
    const ImageU8 image = render(plan_layout(sample.text, config), font, config);
    char name[32];
    std::snprintf(name, sizeof(name), "%06zu.png", sample.index);
    std::string rel = split_name + "/" + std::to_string(sample.label) + "/" + name;
    write_png(out_dir / rel, image);
    split.samples[base + i] = {std::move(rel), sample.label};
  });
  for (const PendingSample& sample : batch) ++split.per_class[sample.label];
  split.sample_count += batch.size();
  batch.clear();
}

// Shared tail: fold the new split into any compatible manifest already on
// disk, then persist. A pre-existing manifest with a different config hash
// describes stale images, so it is replaced rather than merged.
DatasetManifest finish_build(const LayoutConfig& config, const Font& font, int num_classes,
                             const fs::path& out_dir, const std::string& split_name,
                             SplitManifest&& split) {
  DatasetManifest manifest;
  manifest.config = config;
  manifest.font_sha256 = font.content_hash();
  manifest.num_classes = num_classes;

  const fs::path manifest_path = out_dir / "manifest.json";
  if (fs::exists(manifest_path)) {
    try {
      DatasetManifest existing = load_manifest(manifest_path);
      if (config_hash(existing) == config_hash(manifest) &&
          existing.num_classes == num_classes) {
        manifest.splits = std::move(existing.splits);
      }
    } catch (const IoError&) {
      // unreadable manifest: fall through and rewrite it
    }
  }
  manifest.splits[split_name] = std::move(split);
  save_manifest(manifest, manifest_path);
  return manifest;
}

}  // namespace

std::string config_hash(const LayoutConfig& config, const std::string& font_sha256) {
  return Sha256::hex(config_json(config, font_sha256).dump());
}

std::string config_hash(const DatasetManifest& manifest) {
  return config_hash(manifest.config, manifest.font_sha256);
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << manifest_json(manifest).dump(2) << '\n';
  if (!out) throw IoError("short write to " + path.string());
}

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return manifest_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": malformed manifest: " + e.what());
  }
}

DatasetManifest build_dataset(const Corpus& corpus, const LayoutConfig& config, const Font& font,
                              const fs::path& out_dir, const std::string& split_name) {
  config.validate();
  SplitManifest split;
  std::set<int> dirs_made;
  std::vector<PendingSample> batch;
  batch.reserve(corpus.samples.size());
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    batch.push_back({i, corpus.samples[i].label, corpus.samples[i].text});
  }
  flush_batch(batch, config, font, out_dir, split_name, split, dirs_made);
  return finish_build(config, font, corpus.num_classes, out_dir, split_name, std::move(split));
}

DatasetManifest build_dataset_csv(const fs::path& csv_path, int num_classes,
                                  const ColumnSpec& columns, const LayoutConfig& config,
                                  const Font& font, const fs::path& out_dir,
                                  const std::string& split_name) {
  config.validate();
  constexpr std::size_t kBatch = 512;
  SplitManifest split;
  std::set<int> dirs_made;
  std::vector<PendingSample> batch;
  batch.reserve(kBatch);
  std::size_t index = 0;
  for_each_sample(csv_path, num_classes, columns, [&](LabeledSample&& sample) {
    batch.push_back({index++, sample.label, std::move(sample.text)});
    if (batch.size() >= kBatch) {
      flush_batch(batch, config, font, out_dir, split_name, split, dirs_made);
    }
  });
  flush_batch(batch, config, font, out_dir, split_name, split, dirs_made);
  return finish_build(config, font, num_classes, out_dir, split_name, std::move(split));
}

}  // namespace glyphgrid
