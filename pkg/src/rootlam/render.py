"""Pictures of laminations on the unit disk as SVG 1.1 text.

An angle t sits at parameter t of a full counterclockwise turn with
zero at the rightmost point of the circle.  Chords are drawn as
hyperbolic geodesics: circular arcs orthogonal to the unit circle,
straight through the center when the endpoints are antipodal.  Every
coordinate passes through one fixed-width formatter, so equal inputs
produce byte-identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .circle import Chord, GapLeaf, normalize
from .gaps import classify_gap
from .piles import LaminationApprox
from .portrait import CriticalPortrait
from .roots import RootReport
from .subdivision import Region

__all__ = [
    "RenderOptions",
    "render_lamination",
    "render_report",
    "render_tiles",
]

LEAF_COLOR = "#1a1a1a"
PORTRAIT_COLOR = "#d95f0e"
PORTAL_FILL = "#e34a33"
CYCLE_FILLS = {
    "hyperbolic": "#9ecae1",
    "finite": "#c7c7c7",
    "Siegel": "#a1d99b",
    "caterpillar": "#fdae6b",
}
TILE_FILLS = ("#3182bd", "#6baed6", "#9ecae1", "#c6dbef", "#deebf7")


@dataclass(frozen=True)
class RenderOptions:
    size: int = 600  # pixel width and height
    stroke: float = 1.5  # leaf stroke width in pixels
    geodesics: bool = True  # straight chords when off

    @property
    def unit_stroke(self) -> float:
        # the viewBox spans 2.2 units across `size` pixels
        return self.stroke * 2.2 / self.size


def _fmt(x: float) -> str:
    s = f"{x:.5f}"
    return "0.00000" if s == "-0.00000" else s


def _pt(t: Fraction) -> Tuple[float, float]:
    a = 2.0 * math.pi * float(t)
    return (math.cos(a), -math.sin(a))


def _chord_segment(a: Fraction, b: Fraction, geodesics: bool) -> str:
    """The path command from point(a) to point(b), without the moveto."""
    x2, y2 = _pt(b)
    if not geodesics or normalize(a - b) == Fraction(1, 2):
        return f"L {_fmt(x2)} {_fmt(y2)}"
    x1, y1 = _pt(a)
    sx, sy = x1 + x2, y1 + y2
    n2 = sx * sx + sy * sy
    cx, cy = 2.0 * sx / n2, 2.0 * sy / n2
    r = math.sqrt(cx * cx + cy * cy - 1.0)
    cross = (x1 - cx) * (y2 - cy) - (y1 - cy) * (x2 - cx)
    sweep = 1 if cross > 0 else 0
    return f"A {_fmt(r)} {_fmt(r)} 0 0 {sweep} {_fmt(x2)} {_fmt(y2)}"


def _arc_segment(s: Fraction, e: Fraction) -> str:
    """The unit-circle arc command from point(s) counterclockwise to point(e).

    Counterclockwise in angle coordinates is sweep 0 on the emitted,
    y-flipped plane.
    """
    x, y = _pt(e)
    large = 1 if normalize(e - s) > Fraction(1, 2) else 0
    return f"A 1.00000 1.00000 0 {large} 0 {_fmt(x)} {_fmt(y)}"


def _full_circle_path() -> str:
    return (
        "M 1.00000 0.00000 "
        "A 1.00000 1.00000 0 1 0 -1.00000 0.00000 "
        "A 1.00000 1.00000 0 1 0 1.00000 0.00000 Z"
    )


def _chord_path(c: Chord, geodesics: bool) -> str:
    x, y = _pt(c.a)
    return f"M {_fmt(x)} {_fmt(y)} {_chord_segment(c.a, c.b, geodesics)}"


def _polygon_path(poly: GapLeaf, geodesics: bool) -> str:
    """Closed path around the hyperbolic hull of the polygon vertices."""
    vs = poly.vertices
    x, y = _pt(vs[0])
    parts = [f"M {_fmt(x)} {_fmt(y)}"]
    for i in range(len(vs)):
        parts.append(_chord_segment(vs[i], vs[(i + 1) % len(vs)], geodesics))
    parts.append("Z")
    return " ".join(parts)


def _region_path(region: Region, geodesics: bool) -> str:
    """Closed path tracing a face boundary, arcs on the circle included."""
    if region.whole or region._lone_full_arc():
        return _full_circle_path()
    first = region.boundary[0]
    x, y = _pt(first[1])
    parts = [f"M {_fmt(x)} {_fmt(y)}"]
    for item in region.boundary:
        if item[0] == "arc":
            parts.append(_arc_segment(item[1], item[2]))
        else:
            parts.append(_chord_segment(item[1], item[2], geodesics))
    parts.append("Z")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# document assembly


def _document(body: Sequence[str], opts: RenderOptions) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{opts.size}" height="{opts.size}" '
        'viewBox="-1.1 -1.1 2.2 2.2">\n'
    )
    rim = (
        '<circle cx="0" cy="0" r="1" fill="none" stroke="#000000" '
        f'stroke-width="{_fmt(opts.unit_stroke)}"/>\n'
    )
    return head + "".join(b + "\n" for b in body) + rim + "</svg>\n"


def _leaf_elements(
    leaves: Sequence[Chord], opts: RenderOptions, color: str = LEAF_COLOR
) -> List[str]:
    w = _fmt(opts.unit_stroke)
    return [
        f'<path d="{_chord_path(c, opts.geodesics)}" fill="none" '
        f'stroke="{color}" stroke-width="{w}"/>'
        for c in sorted(leaves)
    ]


def _portrait_elements(
    portrait: CriticalPortrait, opts: RenderOptions
) -> List[str]:
    """Critical chords in accent color, portal polygons filled on top."""
    out = []
    w = _fmt(opts.unit_stroke * 1.6)
    for c in portrait.chords:
        out.append(
            f'<path d="{_chord_path(c, opts.geodesics)}" fill="none" '
            f'stroke="{PORTRAIT_COLOR}" stroke-width="{w}"/>'
        )
    for s in portrait.sets:
        if not s.is_portal:
            continue
        out.append(
            f'<path d="{_polygon_path(s.polygon, opts.geodesics)}" '
            f'fill="{PORTAL_FILL}" fill-opacity="0.35" '
            f'stroke="{PORTAL_FILL}" stroke-width="{w}"/>'
        )
    return out


def render_lamination(
    lam: LaminationApprox,
    portrait: Optional[CriticalPortrait] = None,
    opts: RenderOptions = RenderOptions(),
) -> str:
    body = _leaf_elements(lam.leaves, opts)
    if portrait is not None:
        body += _portrait_elements(portrait, opts)
    return _document(body, opts)


def render_report(rep: RootReport, opts: RenderOptions = RenderOptions()) -> str:
    """The root lamination with its periodic gap cycles shaded by class."""
    d = rep.portrait.degree
    fills: List[str] = []
    for cyc in rep.cycles:
        label = classify_gap(cyc, d).label
        color = CYCLE_FILLS.get(label, "#eeeeee")
        for g in cyc.gaps:
            fills.append(
                f'<path d="{_region_path(g.region, opts.geodesics)}" '
                f'fill="{color}" fill-opacity="0.6" stroke="none"/>'
            )
    body = fills + _leaf_elements(rep.lamination.leaves, opts)
    body += _portrait_elements(rep.portrait, opts)
    return _document(body, opts)


def render_tiles(
    portrait: CriticalPortrait,
    tls: Sequence[Tuple[GapLeaf, int]],
    opts: RenderOptions = RenderOptions(),
) -> str:
    """Tiles filled by generation, oldest on top of the palette."""
    w = _fmt(opts.unit_stroke)
    body = []
    for poly, gen in sorted(tls, key=lambda x: (-x[1], x[0].vertices)):
        color = TILE_FILLS[min(gen, len(TILE_FILLS) - 1)]
        body.append(
            f'<path d="{_polygon_path(poly, opts.geodesics)}" '
            f'fill="{color}" fill-opacity="0.8" '
            f'stroke="{LEAF_COLOR}" stroke-width="{w}"/>'
        )
    body += _portrait_elements(portrait, opts)
    return _document(body, opts)
