#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace glyphgrid {

// Decodes UTF-8 into codepoints. Invalid sequences become U+FFFD, one
// replacement per rejected byte.
std::vector<char32_t> decode_utf8(std::string_view text);

void append_utf8(std::string& out, char32_t cp);
std::string encode_utf8(char32_t cp);

// Unicode White_Space property (full list, incl. NBSP and U+3000).
bool is_whitespace(char32_t cp);

// Splits text into user-perceived characters (grapheme clusters), each
// returned as a UTF-8 string. Implements the cluster boundary rules for
// CR/LF, controls, Hangul jamo, Extend/ZWJ, regional-indicator pairs, and
// ZWJ-joined pictograph sequences (emoji joins, with Extended_Pictographic
// approximated by the common emoji blocks). The Extend table covers the
// common combining blocks (Latin diacritics, Greek/Cyrillic, Hebrew,
// Arabic, Thai, kana voicing marks, CJK tone marks, variation selectors);
// SpacingMark/Prepend scripts are not covered, so Indic clusters may
// over-split.
std::vector<std::string> grapheme_clusters(std::string_view text);

// Number of clusters without materializing them.
std::size_t grapheme_count(std::string_view text);

}  // namespace glyphgrid
