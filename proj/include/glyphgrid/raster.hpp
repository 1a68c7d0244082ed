#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "glyphgrid/image.hpp"
#include "glyphgrid/layout.hpp"

namespace glyphgrid {

// An immutable, shareable handle to a parsed scalable font. Copies share
// the underlying font data, so one loaded font can serve any number of
// concurrent renders.
class Font {
 public:
  // Throws FontError {not found, unparseable}.
  static Font load(const std::filesystem::path& path);

  // True when the base codepoint of the cluster maps to a real glyph.
  bool has_glyph(std::string_view grapheme) const;

  // Renders one grapheme cluster into a cell_px x cell_px bitmap:
  // the em square is scaled to the cell, the advance box centered
  // horizontally, the ascent aligned to the cell top, and anything
  // outside the cell clipped. Whitespace gives an all-zero bitmap;
  // clusters without a base glyph give the hollow tofu rectangle.
  // Trailing combining marks are overlaid at the advanced pen position
  // when the font covers them.
  ImageU8 rasterize(std::string_view grapheme, int cell_px) const;

  // SHA-256 of the font file content, in hex.
  const std::string& content_hash() const;

  const std::filesystem::path& path() const;

 private:
  struct Impl;
  explicit Font(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// The deterministic missing-glyph bitmap: a 1-px hollow rectangle inset
// 2 px from the cell edge.
ImageU8 tofu_bitmap(int cell_px);

// Composites a layout plan into the final image: black background, each
// cell's bitmap max-blended at the cell origin. Throws ConfigError when
// the plan addresses cells outside the configured grid.
ImageU8 render(const LayoutPlan& plan, const Font& font, const LayoutConfig& config);

}  // namespace glyphgrid
