#include "glyphgrid/raster.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "glyphgrid/errors.hpp"
#include "glyphgrid/sha256.hpp"
#include "glyphgrid/unicode.hpp"

#include "stb_truetype.hh"

namespace glyphgrid {

struct Font::Impl {
  std::filesystem::path path;
  std::vector<unsigned char> data;
  stbtt_fontinfo info;
  std::string hash;
};

Font Font::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FontError("font not found: " + path.string());
  auto impl = std::make_shared<Impl>();
  impl->path = path;
  impl->data.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  if (impl->data.empty()) throw FontError("font file is empty: " + path.string());
  const int offset = stbtt_GetFontOffsetForIndex(impl->data.data(), 0);
  if (offset < 0 || !stbtt_InitFont(&impl->info, impl->data.data(), offset)) {
    throw FontError("not a parseable font: " + path.string());
  }
  impl->hash = Sha256::hex(std::span<const std::uint8_t>(impl->data.data(), impl->data.size()));
  return Font(std::move(impl));
}

const std::string& Font::content_hash() const { return impl_->hash; }

const std::filesystem::path& Font::path() const { return impl_->path; }

bool Font::has_glyph(std::string_view grapheme) const {
  const auto cps = decode_utf8(grapheme);
  if (cps.empty()) return false;
  return stbtt_FindGlyphIndex(&impl_->info, static_cast<int>(cps.front())) != 0;
}

ImageU8 tofu_bitmap(int cell_px) {
  ImageU8 cell = ImageU8::Zero(cell_px, cell_px);
  const int lo = 2;
  const int hi = cell_px - 3;
  if (hi < lo) return cell;  // cell too small for the inset rectangle
  for (int i = lo; i <= hi; ++i) {
    cell(lo, i) = 255;
    cell(hi, i) = 255;
    cell(i, lo) = 255;
    cell(i, hi) = 255;
  }
  return cell;
}

namespace {

// Max-blend a glyph bitmap into the cell at (x, y), clipping to the cell.
void blit(ImageU8& cell, const unsigned char* src, int w, int h, int x, int y) {
  const int cell_px = static_cast<int>(cell.rows());
  for (int sy = 0; sy < h; ++sy) {
    const int dy = y + sy;
    if (dy < 0 || dy >= cell_px) continue;
    for (int sx = 0; sx < w; ++sx) {
      const int dx = x + sx;
      if (dx < 0 || dx >= cell_px) continue;
      const std::uint8_t v = src[sy * w + sx];
      if (v > cell(dy, dx)) cell(dy, dx) = v;
    }
  }
}

// Half-away-from-zero.
int round_px(double v) { return static_cast<int>(std::llround(v)); }

}  // namespace

ImageU8 Font::rasterize(std::string_view grapheme, int cell_px) const {
  if (cell_px < 1) throw ConfigError("cell_px must be >= 1");
  ImageU8 cell = ImageU8::Zero(cell_px, cell_px);
  const auto cps = decode_utf8(grapheme);
  if (cps.empty()) return cell;
  if (is_whitespace(cps.front())) return cell;

  const stbtt_fontinfo* info = &impl_->info;
  const int base_glyph = stbtt_FindGlyphIndex(info, static_cast<int>(cps.front()));
  if (base_glyph == 0) return tofu_bitmap(cell_px);

  const float scale = stbtt_ScaleForMappingEmToPixels(info, static_cast<float>(cell_px));
  int ascent = 0, descent = 0, line_gap = 0;
  stbtt_GetFontVMetrics(info, &ascent, &descent, &line_gap);
  const int baseline = static_cast<int>(std::floor(ascent * static_cast<double>(scale)));

  int advance = 0, lsb = 0;
  stbtt_GetGlyphHMetrics(info, base_glyph, &advance, &lsb);
  const double advance_px = advance * static_cast<double>(scale);
  const int pen_x = round_px((cell_px - advance_px) / 2.0);

  std::vector<unsigned char> scratch;
  auto draw_glyph = [&](int glyph, int origin_x) {
    int x0, y0, x1, y1;
    stbtt_GetGlyphBitmapBox(info, glyph, scale, scale, &x0, &y0, &x1, &y1);
    const int w = x1 - x0;
    const int h = y1 - y0;
    if (w <= 0 || h <= 0) return;
    scratch.assign(static_cast<std::size_t>(w) * h, 0);
    stbtt_MakeGlyphBitmap(info, scratch.data(), w, h, w, scale, scale, glyph);
    blit(cell, scratch.data(), w, h, origin_x + x0, baseline + y0);
  };

  draw_glyph(base_glyph, pen_x);

  // combining marks ride at the pen position after the base advance;
  // marks the font does not cover are skipped
  const int pen_after = pen_x + round_px(advance_px);
  for (std::size_t i = 1; i < cps.size(); ++i) {
    const int glyph = stbtt_FindGlyphIndex(info, static_cast<int>(cps[i]));
    if (glyph == 0) continue;
    draw_glyph(glyph, pen_after);
  }
  return cell;
}

ImageU8 render(const LayoutPlan& plan, const Font& font, const LayoutConfig& config) {
  const CellGeometry geo = derive_geometry(config);
  ImageU8 image = ImageU8::Zero(config.image_size, config.image_size);
  for (const auto& placement : plan.placements) {
    if (placement.row < 0 || placement.row >= geo.rows || placement.col < 0 ||
        placement.col >= geo.cols) {
      throw ConfigError("placement at (" + std::to_string(placement.row) + "," +
                        std::to_string(placement.col) + ") is outside the " +
                        std::to_string(geo.rows) + "x" + std::to_string(geo.cols) + " grid");
    }
    const ImageU8 bitmap = font.rasterize(placement.grapheme, geo.cell_px);
    image.block(placement.row * geo.cell_px, placement.col * geo.cell_px, geo.cell_px,
                geo.cell_px) = image
                                   .block(placement.row * geo.cell_px,
                                          placement.col * geo.cell_px, geo.cell_px, geo.cell_px)
                                   .cwiseMax(bitmap);
  }
  return image;
}

}  // namespace glyphgrid
