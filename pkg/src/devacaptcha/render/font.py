"""Font loading, glyph coverage, and per-codepoint mask extraction.

Glyphs are rasterized one codepoint at a time through FreeType's basic
layout, so placement stays fully under our control; no OpenType shaping
is involved. Coverage comes from parsing the font's cmap directly
(formats 4 and 12), since a rasterizer happily draws .notdef boxes.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw, ImageFont


class FontLoadError(Exception):
    pass


class MissingGlyph(Exception):
    """The font's cmap has no glyph for one or more codepoints."""

    def __init__(self, codepoints):
        self.codepoints = sorted(codepoints)
        listing = ", ".join(f"U+{cp:04X}" for cp in self.codepoints)
        super().__init__(f"font lacks glyphs for: {listing}")


def default_font_paths() -> dict[str, Path]:
    """Bundled open-licensed Devanagari fonts (label -> path)."""
    base = resources.files("devacaptcha").joinpath("assets/fonts")
    return {
        "regular": Path(str(base.joinpath("NotoSansDevanagari_400Regular.ttf"))),
        "bold": Path(str(base.joinpath("NotoSansDevanagari_700Bold.ttf"))),
    }


def _parse_cmap_format4(data: bytes, offset: int) -> set[int]:
    seg_count = struct.unpack_from(">H", data, offset + 6)[0] // 2
    ends = struct.unpack_from(f">{seg_count}H", data, offset + 14)
    starts_off = offset + 14 + 2 * seg_count + 2  # +2 skips reservedPad
    starts = struct.unpack_from(f">{seg_count}H", data, starts_off)
    deltas_off = starts_off + 2 * seg_count
    deltas = struct.unpack_from(f">{seg_count}h", data, deltas_off)
    range_off_base = deltas_off + 2 * seg_count
    range_offsets = struct.unpack_from(f">{seg_count}H", data, range_off_base)

    covered: set[int] = set()
    for i in range(seg_count):
        start, end = starts[i], ends[i]
        if start == 0xFFFF:
            continue
        for cp in range(start, min(end, 0xFFFE) + 1):
            if range_offsets[i] == 0:
                glyph = (cp + deltas[i]) & 0xFFFF
            else:
                addr = range_off_base + 2 * i + range_offsets[i] + 2 * (cp - start)
                if addr + 2 > len(data):
                    continue
                glyph = struct.unpack_from(">H", data, addr)[0]
                if glyph != 0:
                    glyph = (glyph + deltas[i]) & 0xFFFF
            if glyph != 0:
                covered.add(cp)
    return covered


def _parse_cmap_format12(data: bytes, offset: int) -> set[int]:
    n_groups = struct.unpack_from(">I", data, offset + 12)[0]
    covered: set[int] = set()
    pos = offset + 16
    for _ in range(n_groups):
        start, end, start_glyph = struct.unpack_from(">III", data, pos)
        pos += 12
        for cp in range(start, end + 1):
            if start_glyph + (cp - start) != 0:
                covered.add(cp)
    return covered


def parse_cmap_coverage(path: Path) -> set[int]:
    """Set of codepoints the font maps to a real glyph."""
    data = path.read_bytes()
    try:
        num_tables = struct.unpack_from(">H", data, 4)[0]
        cmap_off = None
        for i in range(num_tables):
            tag, _, off, _ = struct.unpack_from(">4sIII", data, 12 + 16 * i)
            if tag == b"cmap":
                cmap_off = off
                break
        if cmap_off is None:
            raise FontLoadError(f"no cmap table in {path}")

        n_sub = struct.unpack_from(">H", data, cmap_off + 2)[0]
        subtables = []
        for i in range(n_sub):
            plat, enc, sub_off = struct.unpack_from(">HHI", data, cmap_off + 4 + 8 * i)
            fmt = struct.unpack_from(">H", data, cmap_off + sub_off)[0]
            subtables.append((plat, enc, fmt, cmap_off + sub_off))

        # prefer a full unicode table, fall back to the BMP one
        for want_fmt in (12, 4):
            for plat, enc, fmt, off in subtables:
                if fmt == want_fmt and plat in (0, 3):
                    if fmt == 12:
                        return _parse_cmap_format12(data, off)
                    return _parse_cmap_format4(data, off)
        raise FontLoadError(f"no usable cmap subtable in {path} (have {subtables})")
    except struct.error as exc:
        raise FontLoadError(f"malformed font file {path}: {exc}") from exc


@dataclass(frozen=True)
class Glyph:
    """One rasterized glyph. ``mask`` is (h, w) uint8 with 255 = ink;
    (dx, dy) place the mask's top-left relative to the pen position and
    the top of the line box. ``advance`` moves the pen."""

    mask: np.ndarray
    dx: int
    dy: int
    advance: float


_HEADLINE_PROBES = "कनमत"  # ka na ma ta


class FontResource:
    """One font file at one pixel size, with cached glyph masks."""

    def __init__(self, path: str | Path, size: int, key: str = ""):
        self.path = Path(path)
        self.size = int(size)
        self.key = key or self.path.stem
        if not self.path.exists():
            raise FontLoadError(f"font file not found: {self.path}")
        try:
            self._pil = ImageFont.truetype(
                str(self.path), self.size, layout_engine=ImageFont.Layout.BASIC
            )
        except OSError as exc:
            raise FontLoadError(f"cannot load font {self.path}: {exc}") from exc
        self.ascent, self.descent = self._pil.getmetrics()
        self._coverage = parse_cmap_coverage(self.path)
        self._glyphs: dict[int, Glyph] = {}
        self._headline_row: int | None = None

    @property
    def line_height(self) -> int:
        return self.ascent + self.descent

    def covers(self, cp: int) -> bool:
        return cp in self._coverage

    def missing(self, codepoints) -> list[int]:
        return sorted({cp for cp in codepoints if cp not in self._coverage})

    def glyph(self, cp: int) -> Glyph:
        cached = self._glyphs.get(cp)
        if cached is not None:
            return cached
        if cp not in self._coverage:
            raise MissingGlyph([cp])

        pad = 2 * self.size
        canvas_w = 4 * self.size
        canvas_h = self.line_height + self.size // 2
        img = Image.new("L", (canvas_w, canvas_h), 0)
        ImageDraw.Draw(img).text((pad, 0), chr(cp), font=self._pil, fill=255)
        arr = np.asarray(img)
        ys, xs = np.nonzero(arr)
        if len(ys) == 0:
            g = Glyph(np.zeros((0, 0), np.uint8), 0, 0, self._pil.getlength(chr(cp)))
        else:
            y0, y1 = ys.min(), ys.max() + 1
            x0, x1 = xs.min(), xs.max() + 1
            g = Glyph(
                arr[y0:y1, x0:x1].copy(),
                int(x0) - pad,
                int(y0),
                self._pil.getlength(chr(cp)),
            )
        self._glyphs[cp] = g
        return g

    @property
    def headline_row(self) -> int:
        """Row of the shirorekha within the line box, calibrated by
        rendering a few bare consonants and taking the densest row."""
        if self._headline_row is None:
            width = 0.0
            glyphs = []
            for ch in _HEADLINE_PROBES:
                if self.covers(ord(ch)):
                    g = self.glyph(ord(ch))
                    glyphs.append((g, width))
                    width += g.advance
            if not glyphs:
                self._headline_row = max(1, round(self.ascent * 0.32))
                return self._headline_row
            canvas = np.zeros((self.line_height + self.size // 2, int(width) + 8), np.uint8)
            for g, x in glyphs:
                h, w = g.mask.shape
                x0 = int(x) + g.dx
                canvas[g.dy : g.dy + h, x0 : x0 + w] = np.maximum(
                    canvas[g.dy : g.dy + h, x0 : x0 + w], g.mask
                )
            self._headline_row = int(canvas.sum(axis=1).argmax())
        return self._headline_row


class FontSet:
    """Named fonts plus a cache of size variants; the first is primary."""

    def __init__(self, paths: dict[str, str | Path], size: int):
        if not paths:
            raise FontLoadError("at least one font is required")
        self.paths = {k: Path(v) for k, v in paths.items()}
        self.size = int(size)
        self._cache: dict[tuple[str, int], FontResource] = {}
        self.keys = list(self.paths)
        self.primary = self.resource(self.keys[0], size)

    def resource(self, key: str, size: int | None = None) -> FontResource:
        size = self.size if size is None else int(size)
        size = max(8, size)
        cached = self._cache.get((key, size))
        if cached is None:
            if key not in self.paths:
                raise FontLoadError(f"unknown font key {key!r}")
            cached = FontResource(self.paths[key], size, key=key)
            self._cache[(key, size)] = cached
        return cached
