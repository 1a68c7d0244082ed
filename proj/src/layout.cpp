#include "glyphgrid/layout.hpp"

#include "glyphgrid/errors.hpp"
#include "glyphgrid/unicode.hpp"

namespace glyphgrid {

namespace {

bool is_whitespace_cluster(const std::string& cluster) {
  const auto cps = decode_utf8(cluster);
  return !cps.empty() && is_whitespace(cps.front());
}

// Clusters grouped into words (maximal non-whitespace runs).
std::vector<std::vector<std::string>> split_words(std::string_view text) {
  std::vector<std::vector<std::string>> words;
  std::vector<std::string> current;
  for (auto& cluster : grapheme_clusters(text)) {
    if (is_whitespace_cluster(cluster)) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(std::move(cluster));
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

}  // namespace

std::string to_string(Segmentation mode) {
  return mode == Segmentation::char_level ? "char" : "word";
}

Segmentation segmentation_from_string(std::string_view name) {
  if (name == "char") return Segmentation::char_level;
  if (name == "word") return Segmentation::word_level;
  throw ConfigError("unknown segmentation mode: " + std::string(name) +
                    " (expected \"char\" or \"word\")");
}

void LayoutConfig::validate() const {
  if (grid_dim < 1) throw ConfigError("grid_dim must be >= 1");
  if (image_size < grid_dim) throw ConfigError("image_size must be >= grid_dim");
  if (image_size % grid_dim != 0) {
    throw ConfigError("image_size " + std::to_string(image_size) +
                      " is not divisible by grid_dim " + std::to_string(grid_dim));
  }
  if (cut_length != grid_dim * grid_dim) {
    throw ConfigError("cut_length " + std::to_string(cut_length) + " must equal grid_dim^2 = " +
                      std::to_string(grid_dim * grid_dim));
  }
}

CellGeometry derive_geometry(const LayoutConfig& config) {
  config.validate();
  return CellGeometry{config.image_size / config.grid_dim, config.grid_dim, config.grid_dim};
}

std::vector<std::string> segment(std::string_view text, Segmentation mode) {
  if (mode == Segmentation::word_level) {
    std::vector<std::string> tokens;
    for (auto& word : split_words(text)) {
      std::string joined;
      for (const auto& cluster : word) joined += cluster;
      tokens.push_back(std::move(joined));
    }
    return tokens;
  }
  // char_level: whitespace runs collapse to one space, outer whitespace drops
  std::vector<std::string> tokens;
  bool pending_space = false;
  for (auto& cluster : grapheme_clusters(text)) {
    if (is_whitespace_cluster(cluster)) {
      pending_space = !tokens.empty();
    } else {
      if (pending_space) {
        tokens.emplace_back(" ");
        pending_space = false;
      }
      tokens.push_back(std::move(cluster));
    }
  }
  return tokens;
}

LayoutPlan plan_layout(std::string_view text, const LayoutConfig& config) {
  const CellGeometry geo = derive_geometry(config);
  const int grid = geo.cols;
  LayoutPlan plan;

  if (config.segmentation == Segmentation::char_level) {
    auto tokens = segment(text, Segmentation::char_level);
    const std::size_t cut = static_cast<std::size_t>(config.cut_length);
    plan.truncated = tokens.size() > cut;
    const std::size_t count = std::min(tokens.size(), cut);
    plan.placements.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      plan.placements.push_back(
          {std::move(tokens[i]), static_cast<int>(i) / grid, static_cast<int>(i) % grid});
    }
    return plan;
  }

  // word_level
  const auto words = split_words(text);
  int row = 0;
  int col = 0;
  for (const auto& word : words) {
    const int len = static_cast<int>(word.size());
    if (len <= grid) {
      // whole word on one row, preceded by a separator cell mid-row
      if (col > 0) {
        if (col + 1 + len <= grid) {
          col += 1;
        } else {
          row += 1;
          col = 0;
        }
      }
      if (row >= grid) {
        plan.truncated = true;
        break;
      }
      for (const auto& cluster : word) plan.placements.push_back({cluster, row, col++});
    } else {
      // longer than a full row: fill greedily across rows
      if (col > 0) {
        if (col + 1 < grid) {
          col += 1;
        } else {
          row += 1;
          col = 0;
        }
      }
      bool cut = false;
      for (const auto& cluster : word) {
        if (row >= grid) {
          cut = true;
          break;
        }
        plan.placements.push_back({cluster, row, col++});
        if (col == grid) {
          row += 1;
          col = 0;
        }
      }
      if (cut) {
        plan.truncated = true;
        break;
      }
    }
  }
  return plan;
}

}  // namespace glyphgrid
