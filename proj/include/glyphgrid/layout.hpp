#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace glyphgrid {

// How text is split into layout units. char_level places one grapheme
// cluster per cell (the CJK default); word_level keeps whitespace
// delimited words atomic when wrapping rows.
enum class Segmentation { char_level, word_level };

std::string to_string(Segmentation mode);
Segmentation segmentation_from_string(std::string_view name);

struct LayoutConfig {
  int image_size = 224;  // pixels per side of the square output image
  int grid_dim = 8;      // cells per row and rows per image
  int cut_length = 64;   // grapheme slots per image; must equal grid_dim^2
  Segmentation segmentation = Segmentation::char_level;
  std::string font_path;  // scalable font file; may be overridden at the CLI

  // Throws ConfigError unless image_size is a positive multiple of
  // grid_dim and cut_length == grid_dim^2.
  void validate() const;
};

struct CellGeometry {
  int cell_px = 0;  // image_size / grid_dim, exact
  int rows = 0;
  int cols = 0;
};

CellGeometry derive_geometry(const LayoutConfig& config);

struct GlyphPlacement {
  std::string grapheme;  // one cluster, UTF-8
  int row = 0;
  int col = 0;

  bool operator==(const GlyphPlacement&) const = default;
};

struct LayoutPlan {
  std::vector<GlyphPlacement> placements;  // reading order, distinct cells
  bool truncated = false;                  // input exceeded the grid
};

// Splits text into layout tokens.
//   char_level: one token per grapheme cluster; runs of whitespace
//     collapse to a single " " token; leading/trailing whitespace is
//     dropped.
//   word_level: tokens are maximal non-whitespace runs.
// Empty text yields an empty list.
std::vector<std::string> segment(std::string_view text, Segmentation mode);

// Assigns tokens to grid cells. char_level fills cells row-major and
// truncates at cut_length. word_level wraps whole words to the next row
// when they do not fit, separates words on a row by one empty cell, and
// splits only words longer than a full row (greedily, filling the
// current row first). Cells left over receive no placement.
LayoutPlan plan_layout(std::string_view text, const LayoutConfig& config);

}  // namespace glyphgrid
