"""Canvas drawing: glyph compositing, the shirorekha, and PNG round-trip.

Rasters are 8-bit grayscale, 0 = ink, 255 = background. Given identical
placements, fonts, and config, output bytes are identical run to run.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from PIL import Image

from ..script import ChallengeText, make_challenge_text
from .font import FontSet, default_font_paths
from .shaping import GlyphPlacement, StripMetrics, shape, shape_cluster


@dataclass(frozen=True)
class CanvasConfig:
    height: int = 100
    font_size: int = 48
    padding: int = 10
    letter_spacing: float = 7.0
    word_spacing: float = 22.0
    min_width: int = 120
    max_width: int = 800
    min_height: int = 60
    max_height: int = 200
    headline_thickness: int = 3

    def __post_init__(self):
        if not self.min_height <= self.height <= self.max_height:
            raise ValueError(
                f"height {self.height} outside [{self.min_height}, {self.max_height}]"
            )


class CanvasOverflow(Exception):
    """Text too wide for the canvas at the requested size."""


@dataclass
class Raster:
    pixels: np.ndarray  # (h, w) uint8, 0 = ink

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def ink_coverage(self) -> float:
        return float((self.pixels < 128).mean())

    def copy(self) -> "Raster":
        return Raster(self.pixels.copy())

    def to_png(self) -> bytes:
        buf = io.BytesIO()
        Image.fromarray(self.pixels, "L").save(buf, "PNG")
        return buf.getvalue()

    @classmethod
    def from_png(cls, data: bytes) -> "Raster":
        img = Image.open(io.BytesIO(data)).convert("L")
        return cls(np.asarray(img, dtype=np.uint8).copy())


def row_projection(raster: Raster) -> np.ndarray:
    """Per-row ink mass (count of dark pixels)."""
    return (raster.pixels < 128).sum(axis=1)


def headline_prominence(raster: Raster) -> float:
    """Max row projection over median positive row projection. Clean
    Devanagari text is headline-dominated; obfuscation destroys this."""
    proj = row_projection(raster).astype(np.float64)
    busy = proj[proj > 0]
    if len(busy) == 0:
        return 0.0
    med = float(np.median(busy))
    if med == 0:
        return math.inf
    return float(proj.max()) / med


def _scaled_mask(mask: np.ndarray, x_scale: float) -> np.ndarray:
    if mask.size == 0:
        return mask
    if abs(x_scale - 1.0) < 1e-9:
        return mask
    h, w = mask.shape
    new_w = max(1, round(w * x_scale))
    img = Image.fromarray(mask, "L").resize((new_w, h), Image.Resampling.BILINEAR)
    return np.asarray(img, dtype=np.uint8)


def rasterize(
    placements: list[GlyphPlacement],
    metrics: StripMetrics,
    config: CanvasConfig,
    fonts: FontSet,
    line_top: int,
    draw_headline: bool = True,
) -> Raster:
    """Composite glyph masks onto a white canvas and draw the shirorekha."""
    if not placements:
        raise ValueError("nothing to rasterize")

    # resolve pen origins
    origins: list[float] = []
    pen = float(config.padding)
    for p in placements:
        pen += p.gap_before
        origins.append(pen)
        pen += p.advance * p.x_scale

    # ink extents per placement (mask overhang included)
    extents: list[tuple[float, float]] = []
    for p, origin in zip(placements, origins):
        left = origin
        right = origin + p.advance * p.x_scale
        for pg in p.glyphs:
            g = fonts.resource(pg.ref.font_key, pg.ref.size).glyph(pg.ref.cp)
            if g.mask.size == 0:
                continue
            gx = origin + (pg.dx * p.x_scale)
            left = min(left, gx)
            right = max(right, gx + g.mask.shape[1] * p.x_scale)
        extents.append((left, right))

    width = math.ceil(max(r for _, r in extents)) + config.padding
    if width > config.max_width:
        raise CanvasOverflow(
            f"text needs {width}px, canvas allows {config.max_width}px"
        )
    width = max(width, config.min_width)

    canvas = np.full((config.height, width), 255, np.uint8)

    for p, origin in zip(placements, origins):
        for pg in p.glyphs:
            g = fonts.resource(pg.ref.font_key, pg.ref.size).glyph(pg.ref.cp)
            mask = _scaled_mask(g.mask, p.x_scale)
            if mask.size == 0:
                continue
            x = round(origin + pg.dx * p.x_scale)
            y = round(line_top + p.baseline_dy + pg.dy)
            _blit_ink(canvas, mask, x, y)

    if draw_headline:
        row = metrics.headline_row
        thick = config.headline_thickness
        by_word: dict[int, list[int]] = {}
        for i, p in enumerate(placements):
            by_word.setdefault(p.word_index, []).append(i)
        for indices in by_word.values():
            x0 = int(min(extents[i][0] for i in indices))
            x1 = int(max(extents[i][1] for i in indices))
            dy = round(np.mean([placements[i].baseline_dy for i in indices]))
            r0 = max(0, row + dy)
            r1 = min(config.height, r0 + thick)
            canvas[r0:r1, max(0, x0) : min(width, x1)] = 0

    return Raster(canvas)


def _blit_ink(canvas: np.ndarray, mask: np.ndarray, x: int, y: int) -> None:
    """Darken canvas by mask (255 = full ink), clipping at the borders."""
    h, w = mask.shape
    ch, cw = canvas.shape
    x0, y0 = max(0, x), max(0, y)
    x1, y1 = min(cw, x + w), min(ch, y + h)
    if x0 >= x1 or y0 >= y1:
        return
    sub = mask[y0 - y : y1 - y, x0 - x : x1 - x]
    region = canvas[y0:y1, x0:x1]
    np.minimum(region, 255 - sub, out=region)


class Renderer:
    """Shape + rasterize with one font set and one canvas config."""

    def __init__(
        self,
        font_paths: dict[str, str] | None = None,
        config: CanvasConfig = CanvasConfig(),
    ):
        self.config = config
        self.fonts = FontSet(font_paths or default_font_paths(), config.font_size)
        self.line_top = max(0, (config.height - self.fonts.primary.line_height) // 2)

    def shape(self, text: ChallengeText | str) -> tuple[list[GlyphPlacement], StripMetrics]:
        if isinstance(text, str):
            text = make_challenge_text(text)
        return shape(
            text,
            self.fonts,
            letter_spacing=self.config.letter_spacing,
            word_spacing=self.config.word_spacing,
            line_top=self.line_top,
        )

    def shape_cluster_with(self, cluster, font_key: str, size: int | None = None):
        """Re-shape one cluster in another font/size (layout-stage hook)."""
        font = self.fonts.resource(font_key, size)
        return shape_cluster(cluster, font)

    def rasterize(
        self,
        placements: list[GlyphPlacement],
        metrics: StripMetrics,
        draw_headline: bool = True,
    ) -> Raster:
        return rasterize(
            placements,
            metrics,
            self.config,
            self.fonts,
            self.line_top,
            draw_headline=draw_headline,
        )

    def render(self, text: ChallengeText | str) -> Raster:
        placements, metrics = self.shape(text)
        return self.rasterize(placements, metrics)
