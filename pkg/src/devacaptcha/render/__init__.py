"""Script-aware rasterization: fonts, simplified shaping, and canvas drawing."""

from .font import FontLoadError, FontResource, FontSet, MissingGlyph, default_font_paths
from .raster import CanvasConfig, CanvasOverflow, Raster, Renderer, headline_prominence, row_projection
from .shaping import GlyphPlacement, GlyphRef, PlacedGlyph, StripMetrics, shape

__all__ = [
    "CanvasConfig",
    "CanvasOverflow",
    "FontLoadError",
    "FontResource",
    "FontSet",
    "GlyphPlacement",
    "GlyphRef",
    "MissingGlyph",
    "PlacedGlyph",
    "Raster",
    "Renderer",
    "StripMetrics",
    "default_font_paths",
    "headline_prominence",
    "row_projection",
    "shape",
]
