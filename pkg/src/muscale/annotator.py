"""Visual annotation of recognized scales and clusters.

Produces the overlay data (colored cluster regions per scale rank plus an
animation timeline that reveals clusters one by one, outermost scale first)
and renders it as a layered SVG over placeholder element rectangles.

Rendering is a pure function of its inputs: fixed document + overlay +
options always yield byte-identical SVG.
"""

from __future__ import annotations

import colorsys
from dataclasses import dataclass, field
from typing import Any
from xml.sax.saxutils import escape, quoteattr

from .canonical import canonical_json_bytes
from .model import Document, Element, WorldRect, document_bbox, hull_of, world_bbox
from .recognizer import MultiscaleHierarchy

# One entry per scale rank, outermost first; hues follow the convention of
# yellow for the outermost scale, then blue, then brown.
DEFAULT_FILLS = ("#F4D03F", "#5DADE2", "#A0672F")
DEFAULT_OPACITY = 0.35

# Procedural hue generation stops here; deeper hierarchies are a sign of a
# degenerate document rather than a design.
MAX_GENERATED_RANKS = 64

REGION_PAD_FRACTION = 0.02  # of the document diagonal
ANIMATION_STEP_SECONDS = 1.0

_KIND_GLYPHS = {
    "image": "img",
    "text": "txt",
    "sketch": "skt",
    "video": "vid",
    "embed": "emb",
    "other": "oth",
}
_KIND_FILLS = {
    "image": "#d9e8f5",
    "text": "#ffffff",
    "sketch": "#eef7e9",
    "video": "#f5e3df",
    "embed": "#efe9f7",
    "other": "#eeeeee",
}


class RankOverflow(Exception):
    """More scale ranks than the palette can cover."""


class UnknownCluster(Exception):
    """A highlight id that names no cluster in the overlay."""

    def __init__(self, cluster_id: int):
        self.cluster_id = cluster_id
        super().__init__(f"no cluster with id {cluster_id}")


@dataclass(frozen=True)
class Palette:
    """Ordered fill colors indexed by scale rank."""

    fills: tuple[str, ...] = DEFAULT_FILLS
    opacity: float = DEFAULT_OPACITY
    auto_extend: bool = True

    def __post_init__(self):
        if len(self.fills) < 3:
            raise ValueError("palette needs at least 3 entries")
        if len(set(f.lower() for f in self.fills)) != len(self.fills):
            raise ValueError("palette colors must be pairwise distinct")

    def fill_for(self, rank: int) -> str:
        if rank < len(self.fills):
            return self.fills[rank]
        if not self.auto_extend or rank >= MAX_GENERATED_RANKS:
            raise RankOverflow(
                f"rank {rank} exceeds palette of {len(self.fills)} entries"
            )
        return _generated_fill(rank, self.fills)


def _generated_fill(rank: int, existing: tuple[str, ...]) -> str:
    # Golden-angle hue walk keeps consecutive generated ranks far apart.
    hue = (0.61803398875 * (rank + 1)) % 1.0
    attempt = 0
    while True:
        r, g, b = colorsys.hls_to_rgb(hue, 0.55, 0.65)
        fill = f"#{round(r * 255):02X}{round(g * 255):02X}{round(b * 255):02X}"
        if fill.lower() not in {f.lower() for f in existing}:
            return fill
        attempt += 1
        hue = (hue + 0.003 * attempt) % 1.0


@dataclass(frozen=True)
class OverlayRegion:
    cluster_id: int
    scale_rank: int
    padded_region: WorldRect
    fill: str
    opacity: float

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "clusterId": self.cluster_id,
            "scaleRank": self.scale_rank,
            "paddedRegion": self.padded_region.to_json_dict(),
            "fill": self.fill,
            "opacity": self.opacity,
        }


@dataclass(frozen=True)
class TimelineStep:
    step_index: int
    scale_rank: int
    cluster_id: int

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "stepIndex": self.step_index,
            "scaleRank": self.scale_rank,
            "clusterId": self.cluster_id,
        }


@dataclass(frozen=True)
class AnnotationOverlay:
    regions: tuple[OverlayRegion, ...]
    timeline: tuple[TimelineStep, ...]
    view_box: WorldRect

    def region_by_cluster(self, cluster_id: int) -> OverlayRegion:
        for r in self.regions:
            if r.cluster_id == cluster_id:
                return r
        raise UnknownCluster(cluster_id)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "regions": [r.to_json_dict() for r in self.regions],
            "timeline": [s.to_json_dict() for s in self.timeline],
            "viewBox": self.view_box.to_json_dict(),
        }

    def canonical_bytes(self) -> bytes:
        return canonical_json_bytes(self.to_json_dict())


def build_overlay(
    doc: Document, hierarchy: MultiscaleHierarchy, palette: Palette | None = None
) -> AnnotationOverlay:
    """Colored padded regions per cluster plus the rank-major reveal timeline."""
    palette = palette or Palette()
    doc_hull = document_bbox(doc)
    if doc_hull is None or not hierarchy.clusters:
        return AnnotationOverlay(
            regions=(), timeline=(), view_box=WorldRect(0.0, 0.0, 0.0, 0.0)
        )
    diagonal = (doc_hull.width**2 + doc_hull.height**2) ** 0.5
    pad = REGION_PAD_FRACTION * diagonal

    regions = []
    timeline = []
    # Hierarchy clusters are already in (rank, spatial order) sequence.
    for step, cluster in enumerate(hierarchy.clusters):
        regions.append(
            OverlayRegion(
                cluster_id=cluster.id,
                scale_rank=cluster.scale_rank,
                padded_region=cluster.region.expand(pad),
                fill=palette.fill_for(cluster.scale_rank),
                opacity=palette.opacity,
            )
        )
        timeline.append(
            TimelineStep(step_index=step, scale_rank=cluster.scale_rank, cluster_id=cluster.id)
        )
    view_box = hull_of([r.padded_region for r in regions] + [doc_hull]).expand(pad)
    return AnnotationOverlay(
        regions=tuple(regions), timeline=tuple(timeline), view_box=view_box
    )


# ---------------------------------------------------------------------------
# SVG rendering


def _num(x: float) -> str:
    """Fixed-precision coordinate text; avoids '-0' and trailing zeros."""
    s = f"{x:.3f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


@dataclass(frozen=True)
class RenderOptions:
    animated: bool = False
    highlight_cluster: int | None = None
    pixel_width: int = 1200


def render_svg(
    doc: Document, overlay: AnnotationOverlay, opts: RenderOptions | None = None
) -> bytes:
    """Layered SVG: background, cluster regions (outer ranks beneath inner),
    element placeholders. Animated output reveals one region per timeline
    step; a highlight emphasizes one region and tightens the view box to it.
    """
    opts = opts or RenderOptions()
    view = overlay.view_box
    if opts.highlight_cluster is not None:
        target = overlay.region_by_cluster(opts.highlight_cluster)
        view = target.padded_region.expand(
            0.05 * max(target.padded_region.width, target.padded_region.height)
        )
    if view.width <= 0 or view.height <= 0:
        view = WorldRect(view.min_x, view.min_y, view.min_x + 1.0, view.min_y + 1.0)

    step_begin = {s.cluster_id: s.step_index for s in overlay.timeline}
    height = max(1, round(opts.pixel_width * view.height / view.width))
    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_num(view.min_x)} '
        f'{_num(view.min_y)} {_num(view.width)} {_num(view.height)}" '
        f'width="{opts.pixel_width}" height="{height}">'
    )
    out.append(
        f'<rect x={quoteattr(_num(view.min_x))} y={quoteattr(_num(view.min_y))} '
        f'width={quoteattr(_num(view.width))} height={quoteattr(_num(view.height))} '
        f'fill={quoteattr(doc.settings.background_color)}/>'
    )

    out.append('<g id="cluster-regions">')
    for region in overlay.regions:  # rank-major: outer ranks painted first
        r = region.padded_region
        radius = min(REGION_PAD_FRACTION * (view.width + view.height), min(r.width, r.height) / 4)
        highlighted = opts.highlight_cluster == region.cluster_id
        stroke = (
            'stroke="#1a1a1a" stroke-width="' + _num(max(r.width, r.height) * 0.01) + '"'
            if highlighted
            else f'stroke={quoteattr(region.fill)} stroke-width="{_num(radius / 8)}"'
        )
        opacity = ' opacity="0"' if opts.animated else ""
        out.append(
            f'<rect id="cluster-{region.cluster_id}" x="{_num(r.min_x)}" y="{_num(r.min_y)}" '
            f'width="{_num(r.width)}" height="{_num(r.height)}" rx="{_num(radius)}" '
            f'fill={quoteattr(region.fill)} fill-opacity="{_num(region.opacity)}" {stroke}'
        )
        if opts.animated:
            begin = step_begin[region.cluster_id] * ANIMATION_STEP_SECONDS
            out[-1] += (
                f'><animate attributeName="opacity" from="0" to="1" '
                f'begin="{_num(begin)}s" dur="{_num(ANIMATION_STEP_SECONDS)}s" '
                f'fill="freeze"/></rect>'
            )
        else:
            out[-1] += f"{opacity}/>"
    out.append("</g>")

    out.append('<g id="elements">')
    for e in doc.elements:
        out.append(_element_svg(e))
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out).encode("utf-8")


def _element_svg(e: Element) -> str:
    t = e.transforms
    deg = t.rotation * 180.0 / 3.141592653589793
    transform = (
        f"translate({_num(t.position.x)} {_num(t.position.y)}) "
        f"rotate({_num(deg)}) scale({_num(t.scale)})"
    )
    stroke_w = max(e.width, e.height) * 0.01
    parts = [
        f'<g transform="{transform}">',
        f'<rect width="{_num(e.width)}" height="{_num(e.height)}" '
        f'fill={quoteattr(_KIND_FILLS[e.kind])} fill-opacity="0.6" '
        f'stroke="#444444" stroke-width="{_num(stroke_w)}"/>',
    ]
    glyph_size = min(e.width, e.height) * 0.18
    parts.append(
        f'<text x="{_num(e.width * 0.04)}" y="{_num(glyph_size)}" '
        f'font-family="monospace" font-size="{_num(glyph_size)}" '
        f'fill="#666666">{_KIND_GLYPHS[e.kind]}</text>'
    )
    if e.kind == "text" and e.text:
        excerpt = e.text[:40] + ("…" if len(e.text) > 40 else "")
        parts.append(
            f'<text x="{_num(e.width / 2)}" y="{_num(e.height / 2)}" '
            f'font-family="sans-serif" font-size="{_num(min(e.width, e.height) * 0.12)}" '
            f'fill="#222222" text-anchor="middle">{escape(excerpt)}</text>'
        )
    parts.append("</g>")
    return "".join(parts)
