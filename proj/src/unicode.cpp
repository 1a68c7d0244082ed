#include "glyphgrid/unicode.hpp"

#include <algorithm>
#include <array>

namespace glyphgrid {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

struct Range {
  char32_t lo;
  char32_t hi;
};

// Grapheme_Extend-ish ranges: Mn/Me blocks of widely used scripts plus
// ZWNJ and variation selectors. Sorted.
constexpr Range kExtendRanges[] = {
    {0x0300, 0x036F},  // combining diacritical marks
    {0x0483, 0x0489},  // Cyrillic
    {0x0591, 0x05BD}, {0x05BF, 0x05BF}, {0x05C1, 0x05C2}, {0x05C4, 0x05C5},
    {0x05C7, 0x05C7},  // Hebrew points
    {0x0610, 0x061A}, {0x064B, 0x065F}, {0x0670, 0x0670}, {0x06D6, 0x06DC},
    {0x06DF, 0x06E4}, {0x06E7, 0x06E8}, {0x06EA, 0x06ED},  // Arabic marks
    {0x0711, 0x0711}, {0x0730, 0x074A},  // Syriac
    {0x07A6, 0x07B0},  // Thaana
    {0x0816, 0x0819}, {0x081B, 0x0823}, {0x0825, 0x0827}, {0x0829, 0x082D},
    {0x08D4, 0x0902},  // Arabic extended + Devanagari anusvara band
    {0x093A, 0x093A}, {0x093C, 0x093C}, {0x0941, 0x0948}, {0x094D, 0x094D},
    {0x0951, 0x0957}, {0x0962, 0x0963},  // Devanagari Mn
    {0x0981, 0x0981}, {0x09BC, 0x09BC}, {0x09C1, 0x09C4}, {0x09CD, 0x09CD},
    {0x09E2, 0x09E3},  // Bengali Mn
    {0x0B01, 0x0B01}, {0x0B3C, 0x0B3C},
    {0x0E31, 0x0E31}, {0x0E34, 0x0E3A}, {0x0E47, 0x0E4E},  // Thai
    {0x0EB1, 0x0EB1}, {0x0EB4, 0x0EBC}, {0x0EC8, 0x0ECD},  // Lao
    {0x0F18, 0x0F19}, {0x0F35, 0x0F35}, {0x0F37, 0x0F37}, {0x0F39, 0x0F39},
    {0x0F71, 0x0F7E}, {0x0F80, 0x0F84},  // Tibetan
    {0x102D, 0x1030}, {0x1032, 0x1037}, {0x1039, 0x103A},  // Myanmar
    {0x135D, 0x135F},  // Ethiopic
    {0x17B4, 0x17B5}, {0x17B7, 0x17BD}, {0x17C6, 0x17C6}, {0x17C9, 0x17D3},  // Khmer
    {0x180B, 0x180D},  // Mongolian free variation selectors
    {0x1AB0, 0x1ABE},  // combining diacritical extended
    {0x1DC0, 0x1DFF},  // combining diacritical supplement
    {0x200C, 0x200C},  // ZWNJ
    {0x20D0, 0x20F0},  // combining marks for symbols
    {0x2CEF, 0x2CF1}, {0x2DE0, 0x2DFF},
    {0x302A, 0x302D},  // CJK tone marks
    {0x3099, 0x309A},  // kana voicing marks
    {0xA66F, 0xA66F}, {0xA674, 0xA67D}, {0xA69E, 0xA69F},
    {0xFB1E, 0xFB1E},
    {0xFE00, 0xFE0F},  // variation selectors
    {0xFE20, 0xFE2F},  // combining half marks
    {0xFF9E, 0xFF9F},  // halfwidth kana voicing
    {0x101FD, 0x101FD},
    {0x1D165, 0x1D169}, {0x1D16E, 0x1D172}, {0x1D17B, 0x1D182},
    {0xE0100, 0xE01EF},  // variation selectors supplement
};

// Extended_Pictographic approximated by the common pictograph blocks (the
// regional-indicator block is deliberately excluded). Enough for emoji ZWJ
// sequences; the full emoji-data ranges are out of scope.
constexpr Range kExtPictRanges[] = {
    {0x00A9, 0x00A9}, {0x00AE, 0x00AE},  // (c) (r)
    {0x203C, 0x203C}, {0x2049, 0x2049},  // !! !?
    {0x2122, 0x2122}, {0x2139, 0x2139},  // tm, info
    {0x2600, 0x27BF},                    // misc symbols, dingbats
    {0x2B00, 0x2BFF},                    // arrows, stars
    {0x1F000, 0x1F1E5},                  // mahjong .. enclosed (before RIs)
    {0x1F200, 0x1FAFF},                  // enclosed CJK .. symbols extended
};

bool in_ranges(char32_t cp, const Range* ranges, std::size_t n) {
  auto it = std::upper_bound(ranges, ranges + n, cp,
                             [](char32_t v, const Range& r) { return v < r.lo; });
  return it != ranges && (it - 1)->hi >= cp;
}

bool is_ext_pict(char32_t cp) {
  return in_ranges(cp, kExtPictRanges, std::size(kExtPictRanges));
}

enum class Break {
  other,
  cr,
  lf,
  control,
  extend,
  zwj,
  regional,
  hangul_l,
  hangul_v,
  hangul_t,
  hangul_lv,
  hangul_lvt,
};

Break break_class(char32_t cp) {
  if (cp == U'\r') return Break::cr;
  if (cp == U'\n') return Break::lf;
  if (cp == 0x200D) return Break::zwj;
  if (cp < 0x20 || cp == 0x7F || (cp >= 0x80 && cp <= 0x9F)) return Break::control;
  if (cp == 0x200B || cp == 0x2028 || cp == 0x2029) return Break::control;
  if (in_ranges(cp, kExtendRanges, std::size(kExtendRanges))) return Break::extend;
  if (cp >= 0x1F1E6 && cp <= 0x1F1FF) return Break::regional;
  // Hangul syllable composition is algorithmic
  if ((cp >= 0x1100 && cp <= 0x115F) || (cp >= 0xA960 && cp <= 0xA97C)) return Break::hangul_l;
  if ((cp >= 0x1160 && cp <= 0x11A7) || (cp >= 0xD7B0 && cp <= 0xD7C6)) return Break::hangul_v;
  if ((cp >= 0x11A8 && cp <= 0x11FF) || (cp >= 0xD7CB && cp <= 0xD7FB)) return Break::hangul_t;
  if (cp >= 0xAC00 && cp <= 0xD7A3) {
    return (cp - 0xAC00) % 28 == 0 ? Break::hangul_lv : Break::hangul_lvt;
  }
  return Break::other;
}

// Boundary between two adjacent classes; regional-indicator pairing is
// handled by the caller via the run length.
bool is_boundary(Break prev, Break next) {
  if (prev == Break::cr && next == Break::lf) return false;                      // CR x LF
  if (prev == Break::cr || prev == Break::lf || prev == Break::control) return true;
  if (next == Break::cr || next == Break::lf || next == Break::control) return true;
  if (next == Break::extend || next == Break::zwj) return false;                 // x Extend/ZWJ
  if (prev == Break::hangul_l &&
      (next == Break::hangul_l || next == Break::hangul_v || next == Break::hangul_lv ||
       next == Break::hangul_lvt)) {
    return false;
  }
  if ((prev == Break::hangul_lv || prev == Break::hangul_v) &&
      (next == Break::hangul_v || next == Break::hangul_t)) {
    return false;
  }
  if ((prev == Break::hangul_lvt || prev == Break::hangul_t) && next == Break::hangul_t) {
    return false;
  }
  return true;
}

// Indices at which a new cluster starts.
std::vector<std::size_t> cluster_starts(const std::vector<char32_t>& cps) {
  std::vector<std::size_t> starts;
  Break prev = Break::other;
  std::size_t ri_run = 0;   // consecutive regional indicators ending at i-1
  bool pict_run = false;    // sequence ending at i-1 matches ExtPict Extend*
  bool zwj_armed = false;   // sequence ending at i-1 matches ExtPict Extend* ZWJ
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const Break cls = break_class(cps[i]);
    const bool pict = is_ext_pict(cps[i]);
    bool boundary;
    if (i == 0) {
      boundary = true;
    } else if (prev == Break::regional && cls == Break::regional) {
      boundary = ri_run % 2 == 0;  // flags pair up two by two
    } else if (zwj_armed && pict) {
      boundary = false;  // emoji ZWJ sequence continues
    } else {
      boundary = is_boundary(prev, cls);
    }
    if (boundary) starts.push_back(i);
    ri_run = cls == Break::regional ? ri_run + 1 : 0;
    zwj_armed = pict_run && cls == Break::zwj;
    pict_run = pict || (pict_run && cls == Break::extend);
    prev = cls;
  }
  return starts;
}

}  // namespace

std::vector<char32_t> decode_utf8(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + len > text.size()) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    // overlongs, surrogates, out of range
    static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (!ok || cp < kMinByLen[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(char32_t cp) {
  std::string s;
  append_utf8(s, cp);
  return s;
}

bool is_whitespace(char32_t cp) {
  switch (cp) {
    case 0x09:
    case 0x0A:
    case 0x0B:
    case 0x0C:
    case 0x0D:
    case 0x20:
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

std::vector<std::string> grapheme_clusters(std::string_view text) {
  const std::vector<char32_t> cps = decode_utf8(text);
  const std::vector<std::size_t> starts = cluster_starts(cps);
  std::vector<std::string> clusters;
  clusters.reserve(starts.size());
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const std::size_t end = k + 1 < starts.size() ? starts[k + 1] : cps.size();
    std::string cluster;
    for (std::size_t i = starts[k]; i < end; ++i) append_utf8(cluster, cps[i]);
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

std::size_t grapheme_count(std::string_view text) {
  return cluster_starts(decode_utf8(text)).size();
}

}  // namespace glyphgrid
