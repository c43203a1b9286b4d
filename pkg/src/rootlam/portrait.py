"""Critical portraits for the degree-d angle map and their plus-structure.

A critical collection is a list of critical chords that are pairwise
unlinked and pairwise distinct.  A critical portrait additionally has
exactly d-1 chords whose endpoint graph is acyclic; it then cuts the disk
into d components.  The plus-structure replaces each endpoint-connected
group of chords by the polygon spanned by its endpoints and records which
polygons touch a periodic angle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .circle import (
    Chord,
    GapLeaf,
    arc_length,
    classify_orbit,
    crosses,
    in_open_arc,
    is_critical,
    is_periodic,
    sigma,
)
from .errors import Duplicate, LaminationError, Linked, NotCritical, NotFull
from .subdivision import Region, subdivide

__all__ = [
    "PortraitSet",
    "CriticalPortrait",
    "validate_collection",
    "is_portrait",
    "endpoint_components",
    "build_plus",
    "classify_sets",
]


def validate_collection(chords: Sequence[Chord], d: int) -> None:
    """Raise NotCritical / Duplicate / Linked if this is not a critical collection."""
    for i, c in enumerate(chords):
        if not is_critical(c, d):
            raise NotCritical(i, c)
    n = len(chords)
    for i in range(n):
        for j in range(i + 1, n):
            if chords[i] == chords[j]:
                raise Duplicate(i, j, chords[i])
            if crosses(chords[i], chords[j]):
                raise Linked(i, j, chords[i], chords[j])


def _acyclic(chords: Sequence[Chord]) -> bool:
    # union-find on endpoints; a chord closing a loop makes the graph cyclic
    parent: Dict[Fraction, Fraction] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in chords:
        for v in (c.a, c.b):
            parent.setdefault(v, v)
        ra, rb = find(c.a), find(c.b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def is_portrait(chords: Sequence[Chord], d: int) -> bool:
    """True when the chords form a critical portrait for the degree-d map."""
    if len(chords) != d - 1:
        return False
    try:
        validate_collection(chords, d)
    except (NotCritical, Duplicate, Linked):
        return False
    return _acyclic(chords)


def endpoint_components(chords: Sequence[Chord]) -> List[List[Chord]]:
    """Group chords into maximal subsets connected through shared endpoints."""
    parent = list(range(len(chords)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    n = len(chords)
    for i in range(n):
        for j in range(i + 1, n):
            if set(chords[i].endpoints()) & set(chords[j].endpoints()):
                parent[find(i)] = find(j)
    groups: Dict[int, List[Chord]] = {}
    for i, c in enumerate(chords):
        groups.setdefault(find(i), []).append(c)
    return sorted(groups.values(), key=lambda g: min(g))


@dataclass(frozen=True)
class PortraitSet:
    """One endpoint-connected part of a portrait, completed to a polygon."""

    polygon: GapLeaf
    image: Fraction
    periodic_vertex: Optional[Fraction]

    @property
    def is_portal(self) -> bool:
        return self.periodic_vertex is not None

    @property
    def is_proper(self) -> bool:
        # every polygon edge is critical, so an edge is proper exactly when
        # neither of its endpoints is periodic
        return self.periodic_vertex is None

    @property
    def size(self) -> int:
        return len(self.polygon.vertices)


@dataclass(frozen=True)
class CriticalPortrait:
    """A validated full critical portrait with its plus-structure."""

    degree: int
    chords: Tuple[Chord, ...]
    sets: Tuple[PortraitSet, ...]
    faces: Tuple[Region, ...]

    @property
    def polygons(self) -> Tuple[GapLeaf, ...]:
        return tuple(s.polygon for s in self.sets)

    @property
    def portals(self) -> Tuple[PortraitSet, ...]:
        return tuple(s for s in self.sets if s.is_portal)

    @property
    def is_side(self) -> bool:
        return all(s.is_proper for s in self.sets)

    def hull_edges(self) -> Tuple[Chord, ...]:
        out = []
        for s in self.sets:
            out.extend(s.polygon.edges())
        return tuple(sorted(set(out)))


def _open_image_arcs_overlap(a1, a2) -> bool:
    # an image arc with equal endpoints is the full circle minus a point
    (p, q), (r, s) = a1, a2
    if p == q or r == s:
        return True
    if (p, q) == (r, s):
        return True
    return (
        in_open_arc(r, p, q)
        or in_open_arc(s, p, q)
        or in_open_arc(p, r, s)
        or in_open_arc(q, r, s)
    )


def check_full(chords: Sequence[Chord], d: int) -> None:
    """Raise NotFull unless each complementary face maps over the whole circle.

    A face fails when one of its boundary arcs is longer than 1/d or when
    the open images of two of its arcs overlap.
    """
    faces = subdivide(chords)
    bound = Fraction(1, d)
    for f in faces:
        arcs = f.arcs
        for (s, e) in arcs:
            if arc_length(s, e) > bound:
                raise NotFull(f"face arc [{s},{e}] longer than 1/{d}")
        images = [(sigma(s, d), sigma(e, d)) for (s, e) in arcs]
        for i in range(len(images)):
            for j in range(i + 1, len(images)):
                if _open_image_arcs_overlap(images[i], images[j]):
                    raise NotFull(
                        f"image arcs of [{arcs[i][0]},{arcs[i][1]}] and "
                        f"[{arcs[j][0]},{arcs[j][1]}] overlap"
                    )


def build_plus(chords: Sequence[Chord], d: int) -> CriticalPortrait:
    """Validate a critical portrait and build its plus-structure.

    Raises NotCritical / Duplicate / Linked for a bad collection, the base
    LaminationError for a wrong chord count or a cyclic endpoint graph, and
    NotFull when a
    complementary face does not cover the circle.
    """
    chords = [c for c in chords]
    validate_collection(chords, d)
    if len(chords) != d - 1:
        raise LaminationError(
            f"need {d - 1} chords for degree {d}, got {len(chords)}"
        )
    if not _acyclic(chords):
        raise LaminationError("endpoint graph of the collection has a cycle")
    check_full(chords, d)

    # every critical chord subtends k/d; fullness forces some innermost face
    # to sit on an arc of length exactly 1/d
    assert any(
        arc_length(c.a, c.b) in (Fraction(1, d), Fraction(d - 1, d)) for c in chords
    )

    sets = []
    for group in endpoint_components(chords):
        verts = sorted({v for c in group for v in c.endpoints()})
        poly = GapLeaf(tuple(verts))
        periodic = [v for v in verts if is_periodic(v, d)]
        # two periodic vertices would be distinct cycle points sharing an
        # image, impossible for an injective map on cycles
        assert len(periodic) <= 1
        sets.append(
            PortraitSet(
                polygon=poly,
                image=sigma(verts[0], d),
                periodic_vertex=periodic[0] if periodic else None,
            )
        )
    faces = subdivide(chords)
    assert len(faces) == d
    return CriticalPortrait(
        degree=d,
        chords=tuple(sorted(chords)),
        sets=tuple(sorted(sets, key=lambda s: s.polygon.vertices)),
        faces=faces,
    )


def classify_sets(portrait: CriticalPortrait) -> List[dict]:
    """Per-set summary used by the command line and the JSON output."""
    out = []
    for s in portrait.sets:
        entry = {
            "vertices": list(s.polygon.vertices),
            "size": s.size,
            "image": s.image,
            "proper": s.is_proper,
            "portal": s.is_portal,
        }
        if s.periodic_vertex is not None:
            oc = classify_orbit(s.periodic_vertex, portrait.degree)
            entry["periodic_vertex"] = s.periodic_vertex
            entry["vertex_period"] = oc.period
        out.append(entry)
    return out
