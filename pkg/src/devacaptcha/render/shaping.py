"""Simplified Devanagari shaping: clusters to positioned glyph references.

Layout rules (no OpenType logic):
  * within a cluster, left matras are drawn before their base;
  * marks carry their font-native offsets, so above-matras land in the
    top strip and below-matras/virama in the bottom strip;
  * conjuncts render as base + explicit virama mark + next base (the
    legible fallback form, since half-form substitution needs GSUB).

Placements keep spacing, baseline shift, and stretch as editable fields;
absolute pen positions are resolved at rasterization time, which lets the
obfuscation layout stage perturb them cheaply.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..script import (
    ChallengeText,
    CharClass,
    Cluster,
    MatraPosition,
    classify,
    matra_position,
    segment_clusters,
)
from .font import FontResource, FontSet, MissingGlyph


@dataclass(frozen=True)
class GlyphRef:
    font_key: str
    size: int
    cp: int


@dataclass(frozen=True)
class PlacedGlyph:
    """Glyph reference positioned relative to its cluster's pen origin
    (x) and the top of the line box (y)."""

    ref: GlyphRef
    dx: float
    dy: float


@dataclass
class GlyphPlacement:
    """One cluster's drawable group. ``gap_before`` is the whitespace
    inserted ahead of the cluster; ``baseline_dy`` shifts it vertically;
    ``x_scale`` stretches its ink horizontally."""

    cluster_index: int
    word_index: int
    cluster: Cluster
    glyphs: list[PlacedGlyph] = field(default_factory=list)
    advance: float = 0.0
    gap_before: float = 0.0
    baseline_dy: float = 0.0
    x_scale: float = 1.0

    def clone(self) -> "GlyphPlacement":
        return replace(self, glyphs=list(self.glyphs))


@dataclass(frozen=True)
class StripMetrics:
    """Vertical anatomy of the rendered text in canvas coordinates."""

    top_height: int
    core_height: int
    bottom_height: int
    headline_row: int

    @property
    def glyph_box_height(self) -> int:
        return self.top_height + self.core_height + self.bottom_height


def _cluster_draw_order(cluster: Cluster) -> list[int]:
    """Codepoints in visual draw order: left matras jump to the front."""
    left = [cp for cp in cluster.codepoints
            if matra_position(cp) is MatraPosition.LEFT]
    rest = [cp for cp in cluster.codepoints
            if matra_position(cp) is not MatraPosition.LEFT]
    return left + rest


def shape_cluster(cluster: Cluster, font: FontResource) -> tuple[list[PlacedGlyph], float]:
    """Position one cluster's glyphs; returns (glyphs, advance)."""
    misses = font.missing(cluster.codepoints)
    if misses:
        raise MissingGlyph(misses)
    glyphs: list[PlacedGlyph] = []
    pen = 0.0
    for cp in _cluster_draw_order(cluster):
        g = font.glyph(cp)
        glyphs.append(
            PlacedGlyph(GlyphRef(font.key, font.size, cp), pen + g.dx, float(g.dy))
        )
        pen += g.advance
    return glyphs, pen


def shape(
    text: ChallengeText,
    fonts: FontSet,
    letter_spacing: float = 7.0,
    word_spacing: float = 22.0,
    line_top: int = 0,
) -> tuple[list[GlyphPlacement], StripMetrics]:
    """Shape a full challenge text with the primary font.

    ``line_top`` is the canvas row of the line-box top (vertical padding),
    so the returned StripMetrics speak canvas coordinates.
    """
    font = fonts.primary
    missing = font.missing(
        ord(ch) for ch in text.normalized if ch != " "
    )
    if missing:
        raise MissingGlyph(missing)

    placements: list[GlyphPlacement] = []
    idx = 0
    for word_index, word in enumerate(text.normalized.split(" ")):
        if not word:
            continue
        for pos_in_word, cluster in enumerate(segment_clusters(word)):
            if idx == 0:
                gap = 0.0
            elif pos_in_word == 0:
                gap = word_spacing
            else:
                gap = letter_spacing
            glyphs, advance = shape_cluster(cluster, font)
            placements.append(
                GlyphPlacement(
                    cluster_index=idx,
                    word_index=word_index,
                    cluster=cluster,
                    glyphs=glyphs,
                    advance=advance,
                    gap_before=gap,
                )
            )
            idx += 1

    headline = font.headline_row
    metrics = StripMetrics(
        top_height=headline,
        core_height=font.ascent - headline,
        bottom_height=font.descent,
        headline_row=line_top + headline,
    )
    return placements, metrics


def is_word_forming(cp: int) -> bool:
    return classify(cp) is not CharClass.OTHER
