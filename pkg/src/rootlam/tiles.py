"""Tiles: iterated polygon pullbacks of the portrait plus-structure.

A tile of generation k+1 is a maximal polygon inside a complementary
component of the generation-k tile union that maps onto an existing
tile.  The polygon pullback works fiberwise per portrait component and
glues pieces that share a collapse vertex.
"""

from __future__ import annotations

import bisect
import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .circle import Chord, GapLeaf, normalize, sigma
from .portrait import CriticalPortrait
from .pullback import fiber
from .subdivision import FootprintIndex, Region, subdivide

__all__ = [
    "polygon_pullbacks",
    "tiles",
    "sigma_m_tile_oracle",
    "sigma_m_portrait_chords",
]


class _ImageFootprint:
    """Forward image of a region footprint under the degree-d map."""

    __slots__ = ("everything", "starts", "ends", "verts")

    def __init__(self, region: Region, d: int):
        self.everything = region.whole
        ivs: List[Tuple[Fraction, Fraction]] = []
        for kind, s, e in region.boundary:
            if kind != "arc":
                continue
            length = Fraction(1) if s == e else normalize(e - s)
            if length * d >= 1:
                self.everything = True
                break
            a = sigma(s, d)
            b = a + length * d
            if b <= 1:
                ivs.append((a, b))
            else:
                ivs.append((a, Fraction(1)))
                ivs.append((Fraction(0), b - 1))
        ivs.sort()
        self.starts = [iv[0] for iv in ivs]
        self.ends = [iv[1] for iv in ivs]
        self.verts = {sigma(v, d) for v in region.vertices}

    def contains(self, t: Fraction) -> bool:
        if self.everything:
            return True
        if t in self.verts:
            return True
        i = bisect.bisect_right(self.starts, t) - 1
        return i >= 0 and t <= self.ends[i]


@functools.lru_cache(maxsize=None)
def _component_footprints(portrait: CriticalPortrait) -> Tuple[FootprintIndex, ...]:
    return tuple(FootprintIndex(comp) for comp in portrait.faces)


def _pullback_pieces(
    poly: GapLeaf, fp: FootprintIndex, portrait: CriticalPortrait
) -> List[GapLeaf]:
    d = portrait.degree
    want = set(poly.vertices)
    pieces: List[Set[Fraction]] = []
    for comp in _component_footprints(portrait):
        pts: Set[Fraction] = set()
        for w in poly.vertices:
            for u in fiber(w, d):
                if fp.contains(u) and comp.contains(u):
                    pts.add(u)
        if pts:
            pieces.append(pts)
    # glue pieces sharing a vertex
    merged: List[Set[Fraction]] = []
    for piece in pieces:
        attached = [m for m in merged if m & piece]
        for m in attached:
            merged.remove(m)
            piece = piece | m
        merged.append(piece)
    out = []
    for m in merged:
        if {sigma(v, d) for v in m} == want:
            out.append(GapLeaf(tuple(sorted(m))))
    return sorted(out, key=lambda g: g.vertices)


def polygon_pullbacks(
    poly: GapLeaf, region: Region, portrait: CriticalPortrait
) -> List[GapLeaf]:
    """Polygon preimages of poly inside the closure of a region.

    Fiber points are collected per portrait component (where the map is
    injective up to boundary collapse), pieces sharing a vertex are glued,
    and only pieces mapping onto the full vertex set survive.
    """
    return _pullback_pieces(poly, FootprintIndex(region), portrait)


def _is_tile_interior(face: Region, tile_vertex_sets: Set[Tuple]) -> bool:
    return not face.arcs and face.vertices in tile_vertex_sets


def tiles(
    portrait: CriticalPortrait, generations: int
) -> List[Tuple[GapLeaf, int]]:
    """All tiles through the given generation, with generation stamps.

    Generation 0 is the plus-structure polygons; each later generation
    adds the maximal pullbacks of existing tiles into the complementary
    components of the current tile union.
    """
    d = portrait.degree
    out: List[Tuple[GapLeaf, int]] = [(poly, 0) for poly in portrait.polygons]
    known: Set[GapLeaf] = set(portrait.polygons)
    for gen in range(1, generations + 1):
        edges: Set[Chord] = set()
        for t, _ in out:
            edges |= set(t.edges())
        faces = subdivide(sorted(edges))
        vertex_sets = {t.vertices for t, _ in out}
        vertex_set_list = [set(vs) for vs in vertex_sets]
        fresh: List[GapLeaf] = []
        for face in faces:
            if _is_tile_interior(face, vertex_sets):
                continue
            fp = FootprintIndex(face)
            img = _ImageFootprint(face, d)
            candidates: List[GapLeaf] = []
            for t, _ in out:
                if not all(img.contains(w) for w in t.vertices):
                    continue
                for copy in _pullback_pieces(t, fp, portrait):
                    if copy in known:
                        continue
                    # a copy riding the boundary of an existing tile is
                    # not a new tile
                    cs = set(copy.vertices)
                    if any(cs <= vs for vs in vertex_set_list):
                        continue
                    candidates.append(copy)
            # keep only inclusion-maximal new polygons in this component
            keep = []
            for c in candidates:
                cs = set(c.vertices)
                if any(cs < set(o.vertices) for o in candidates if o != c):
                    continue
                keep.append(c)
            for c in keep:
                if c not in known:
                    known.add(c)
                    fresh.append(c)
        for c in sorted(fresh, key=lambda g: g.vertices):
            out.append((c, gen))
        if not fresh:
            break
    return out


def sigma_m_portrait_chords(m: int) -> List[Chord]:
    """The all-critical star portrait {0, j/m} whose hull is the m-gon."""
    return [Chord(Fraction(0), Fraction(j, m)) for j in range(1, m)]


def sigma_m_tile_oracle(m: int, generations: int) -> List[Fraction]:
    """Vertices of all tiles through a generation: the points i/m^k.

    Through generation g the tile vertices are exactly the fractions with
    denominator dividing m^(g+1).
    """
    q = m ** (generations + 1)
    return sorted(Fraction(i, q) for i in range(q))
