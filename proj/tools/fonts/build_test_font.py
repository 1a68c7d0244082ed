#!/usr/bin/env python3
"""Builds assets/fonts/glyphgrid-test.ttf, the bundled test font.

The font is a small subset of Noto Sans SC (SIL Open Font License 1.1),
renamed to "GlyphGrid Test" as the OFL requires for modified versions.
Source glyphs are taken from the @fontsource/noto-sans-sc npm package,
which ships the family as unicode-range slices:

    npm install @fontsource/noto-sans-sc
    python3 tools/fonts/build_test_font.py node_modules/@fontsource/noto-sans-sc

Coverage: printable ASCII, a handful of Latin-1 letters, combining
diacritics, CJK punctuation, kana, and ~60 common CJK ideographs.
Everything else intentionally maps to no glyph so the renderer's
missing-glyph path stays testable.

hhea ascent/descent are set to the OS/2 typo values (880/-120 per em
1000) so ascent + |descent| == em and glyphs fill a cell exactly when
the em box is mapped onto it.
"""

import re
import sys
from pathlib import Path

from fontTools.fontBuilder import FontBuilder
from fontTools.pens.recordingPen import DecomposingRecordingPen
from fontTools.pens.ttGlyphPen import TTGlyphPen
from fontTools.ttLib import TTFont

ASCII = [chr(c) for c in range(0x20, 0x7F)]
LATIN1 = list("¡£©°±µ·»¿ÀÁÄÇÈÉÊÑÖÜßàáäçèéêëìíîïñòóôöùúûüÿ")
COMBINING = [chr(c) for c in (0x300, 0x301, 0x302, 0x303, 0x304, 0x308, 0x30A)]
CJK_PUNCT = list("。、，！？；：「」（）·—…‘’“”") + [chr(0x3000)]
KANA = list("あいうえおかきくけこさしすせそがぎぐげごアイウエオカキクケコサシスセソガギグゲゴー")
CJK = list(
    "一二三四五六七八九十百千万"
    "天地人日月水火山口土王大小上中下不了我是的有在他这个们来到时"
    "你好世界文字图像分类本超级符号机器学习"
)
TARGET = sorted(set(ASCII + LATIN1 + COMBINING + CJK_PUNCT + KANA + CJK))

FAMILY = "GlyphGrid Test"
VERSION = "1.0"


def slice_map(pkg_dir: Path):
    """slice name -> set of codepoints, parsed from the weight-400 css."""
    css = (pkg_dir / "400.css").read_text()
    blocks = re.findall(
        r"url\(\./files/(noto-sans-sc-[\w-]+-400-normal)\.woff2\)"
        r".*?unicode-range:\s*([^;]+);",
        css,
        re.S,
    )
    out = {}
    for name, ranges in blocks:
        cps = set()
        for part in ranges.replace("U+", "").split(","):
            a, _, b = part.strip().partition("-")
            cps.update(range(int(a, 16), int(b or a, 16) + 1))
        out[name] = cps
    return out


def main():
    pkg_dir = Path(sys.argv[1] if len(sys.argv) > 1 else "node_modules/@fontsource/noto-sans-sc")
    out_path = Path(__file__).resolve().parents[2] / "assets" / "fonts" / "glyphgrid-test.ttf"

    slices = slice_map(pkg_dir)
    loaded = {}

    def load(name):
        if name not in loaded:
            loaded[name] = TTFont(pkg_dir / "files" / f"{name}.woff")
        return loaded[name]

    upem = None
    metrics_src = None
    glyphs = {}
    cmap = {}
    advances = {}
    for ch in TARGET:
        cp = ord(ch)
        candidates = [n for n, cps in sorted(slices.items()) if cp in cps]
        for name in candidates:
            src = load(name)
            if upem is None:
                upem = src["head"].unitsPerEm
                metrics_src = (src["OS/2"].sTypoAscender, src["OS/2"].sTypoDescender)
            assert src["head"].unitsPerEm == upem
            src_cmap = src.getBestCmap()
            if cp not in src_cmap:
                continue
            src_name = src_cmap[cp]
            new_name = f"uni{cp:04X}"
            rec = DecomposingRecordingPen(src.getGlyphSet())
            src.getGlyphSet()[src_name].draw(rec)
            pen = TTGlyphPen(None)
            rec.replay(pen)
            glyphs[new_name] = pen.glyph()
            cmap[cp] = new_name
            advances[new_name] = src["hmtx"][src_name][0]
            break
        else:
            print(f"warning: U+{cp:04X} {ch!r} not found in any slice, skipped")

    ascent, descent = metrics_src
    order = [".notdef"] + sorted(cmap.values())
    fb = FontBuilder(upem, isTTF=True)
    fb.setupGlyphOrder(order)
    fb.setupCharacterMap(cmap)
    empty = TTGlyphPen(None).glyph()
    glyf = {".notdef": empty}
    for gname in order[1:]:
        glyf[gname] = glyphs[gname] if glyphs.get(gname) is not None else empty
    fb.setupGlyf(glyf)
    metrics = {".notdef": (upem // 2, 0)}
    for gname in order[1:]:
        g = fb.font["glyf"][gname]
        lsb = g.xMin if g.numberOfContours else 0
        metrics[gname] = (advances[gname], lsb)
    fb.setupHorizontalMetrics(metrics)
    fb.setupHorizontalHeader(ascent=ascent, descent=descent, lineGap=0)
    fb.setupNameTable(
        {
            "familyName": FAMILY,
            "styleName": "Regular",
            "uniqueFontIdentifier": f"{FAMILY} {VERSION}",
            "fullName": f"{FAMILY} Regular",
            "version": f"Version {VERSION}",
            "psName": FAMILY.replace(" ", "") + "-Regular",
            "licenseDescription": "Licensed under the SIL Open Font License 1.1. "
            "Derived from Noto Sans SC.",
        }
    )
    fb.setupOS2(
        sTypoAscender=ascent,
        sTypoDescender=descent,
        sTypoLineGap=0,
        usWinAscent=ascent,
        usWinDescent=-descent,
    )
    fb.setupPost()
    fb.font["head"].created = 0
    fb.font["head"].modified = 0
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fb.save(out_path)
    print(f"wrote {out_path}: {len(order)} glyphs, {len(cmap)} mapped codepoints")


if __name__ == "__main__":
    main()
