#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "glyphgrid/corpus.hpp"
#include "glyphgrid/layout.hpp"
#include "glyphgrid/raster.hpp"

namespace glyphgrid {

struct ManifestEntry {
  std::string path;  // relative to the dataset root, forward slashes
  int label = 0;     // 1-based
};

struct SplitManifest {
  std::size_t sample_count = 0;
  std::map<int, std::size_t> per_class;
  std::vector<ManifestEntry> samples;  // corpus order
};

// Everything a consumer needs to trust a rendered dataset: the layout that
// produced it, the font it was drawn with (by content hash, so trees stay
// relocatable), and the file list per split.
struct DatasetManifest {
  LayoutConfig config;
  std::string font_sha256;
  int num_classes = 0;
  std::map<std::string, SplitManifest> splits;
};

// Hash over the fields that change pixels: image_size, grid_dim, cut_length,
// segmentation, and the font bytes. Two datasets with equal hashes render any
// given text identically.
std::string config_hash(const LayoutConfig& config, const std::string& font_sha256);
std::string config_hash(const DatasetManifest& manifest);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);  // throws IoError

// Renders one PNG per sample into out_dir/<split>/<label>/<index>.png and
// writes out_dir/manifest.json. An existing manifest with the same config
// hash keeps its other splits; one with a different hash is replaced whole.
// Rendering is parallel; file order in the manifest follows corpus order.
DatasetManifest build_dataset(const Corpus& corpus, const LayoutConfig& config, const Font& font,
                              const std::filesystem::path& out_dir, const std::string& split);

// Streaming variant: rows come straight from the CSV without materializing
// the corpus. Renders in parallel batches.
DatasetManifest build_dataset_csv(const std::filesystem::path& csv_path, int num_classes,
                                  const ColumnSpec& columns, const LayoutConfig& config,
                                  const Font& font, const std::filesystem::path& out_dir,
                                  const std::string& split);

}  // namespace glyphgrid
