"""Piles of web chords and the preroot lamination approximation.

Web chords are grouped into piles: connected components under the
relation "shares any closed-disk point" (a common endpoint or a
crossing).  The edges of the pile hulls form the preroot prelamination;
concatenation classes of its endpoints give the preroot q-lamination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .circle import Chord, GapLeaf, den_le, is_proper
from .errors import HullEdgeNotInPile, ImproperDetected
from .portrait import CriticalPortrait
from .pullback import Web, iterate_web

__all__ = [
    "Pile",
    "LaminationApprox",
    "ClassPartition",
    "compute_piles",
    "pile_hull_edges",
    "preroot_prelamination",
    "concat_classes",
    "preroot_qlamination",
    "is_proper",
]


@dataclass(frozen=True)
class Pile:
    """A maximal chain-connected group of web chords and its hull."""

    chords: Tuple[Chord, ...]
    hull: GapLeaf

    @property
    def size(self) -> int:
        return len(self.chords)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        p = self.parent
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[ri] = rj


def _rank_chords(chords: Sequence[Chord]) -> List[Tuple[int, int]]:
    # map endpoints to integer ranks; circular order equals rank order
    points = sorted({v for c in chords for v in c.endpoints()})
    rank = {v: i for i, v in enumerate(points)}
    return [(rank[c.a], rank[c.b]) for c in chords]


def _ranks_cross(a1: int, b1: int, a2: int, b2: int) -> bool:
    # strict interleaving of sorted rank pairs; shared ranks never cross
    return (a1 < a2 < b1 < b2) or (a2 < a1 < b2 < b1)


def compute_piles(web: Union[Web, Iterable[Chord]]) -> List[Pile]:
    """Group chords into piles via shared endpoints and crossings.

    The fast path runs on integer endpoint ranks; a direct Fraction
    oracle covers it in the tests.
    """
    chords = sorted(web.chords if isinstance(web, Web) else set(web))
    n = len(chords)
    uf = _UnionFind(n)
    by_point: Dict[Fraction, List[int]] = {}
    for i, c in enumerate(chords):
        for v in set(c.endpoints()):
            by_point.setdefault(v, []).append(i)
    for idxs in by_point.values():
        for j in idxs[1:]:
            uf.union(idxs[0], j)
    ranks = _rank_chords(chords)
    for i in range(n):
        a1, b1 = ranks[i]
        for j in range(i + 1, n):
            if uf.find(i) == uf.find(j):
                continue
            a2, b2 = ranks[j]
            if _ranks_cross(a1, b1, a2, b2):
                uf.union(i, j)
    groups: Dict[int, List[Chord]] = {}
    for i, c in enumerate(chords):
        groups.setdefault(uf.find(i), []).append(c)
    piles = []
    for group in groups.values():
        verts = sorted({v for c in group for v in c.endpoints()})
        piles.append(Pile(chords=tuple(sorted(group)), hull=GapLeaf(tuple(verts))))
    return sorted(piles, key=lambda p: p.hull.vertices)


def pile_hull_edges(pile: Pile) -> Set[Chord]:
    """Boundary edges of the pile hull; each must be a member chord."""
    edges = set(pile.hull.edges())
    members = set(pile.chords)
    for e in edges:
        if e not in members:
            raise HullEdgeNotInPile(f"hull edge {e} missing from pile {pile.hull}")
    return edges


@dataclass(frozen=True)
class LaminationApprox:
    """A finite stand-in for a lamination at given depth and resolution."""

    degree: int
    depth: int
    resolution: Optional[int]
    leaves: Tuple[Chord, ...]
    proper: bool = True
    crossings_free: bool = True

    def __post_init__(self):
        object.__setattr__(self, "leaves", tuple(sorted(set(self.leaves))))

    def __len__(self):
        return len(self.leaves)

    def __contains__(self, c: Chord):
        return c in self.leaves


def _any_crossing(chords: Sequence[Chord]) -> bool:
    ranks = _rank_chords(chords)
    n = len(ranks)
    for i in range(n):
        a1, b1 = ranks[i]
        for j in range(i + 1, n):
            if _ranks_cross(a1, b1, *ranks[j]):
                return True
    return False


def _resolution_filter(
    leaves: Iterable[Chord], resolution: Optional[int]
) -> List[Chord]:
    if resolution is None:
        return sorted(set(leaves))
    return sorted(
        {c for c in leaves if den_le(c.a, resolution) and den_le(c.b, resolution)}
    )


def preroot_prelamination(
    portrait: CriticalPortrait,
    depth: int,
    resolution: Optional[int] = None,
) -> LaminationApprox:
    """Pile-hull edges of the iterated pullback web, resolution-filtered."""
    web = iterate_web(portrait, depth)
    leaves: Set[Chord] = set()
    for pile in compute_piles(web):
        leaves |= pile_hull_edges(pile)
    kept = _resolution_filter(leaves, resolution)
    return LaminationApprox(
        degree=portrait.degree,
        depth=depth,
        resolution=resolution,
        leaves=tuple(kept),
        proper=all(is_proper(c, portrait.degree) for c in kept),
        crossings_free=not _any_crossing(kept),
    )


@dataclass(frozen=True)
class ClassPartition:
    """Endpoint classes of a crossings-free lamination approximation."""

    classes: Tuple[Tuple[Fraction, ...], ...]
    hulls: Tuple[GapLeaf, ...]  # one hull per class of size >= 2

    def class_of(self, t: Fraction) -> Optional[Tuple[Fraction, ...]]:
        for cl in self.classes:
            if t in cl:
                return cl
        return None


def concat_classes(lam: LaminationApprox) -> ClassPartition:
    """Partition leaf endpoints by finite concatenations of leaves.

    Raises ImproperDetected when the hull of some class has an improper
    edge, which cannot happen for a genuine q-lamination input.
    """
    assert lam.crossings_free, "concatenation classes need a crossings-free input"
    points = sorted({v for c in lam.leaves for v in c.endpoints()})
    index = {v: i for i, v in enumerate(points)}
    uf = _UnionFind(len(points))
    for c in lam.leaves:
        uf.union(index[c.a], index[c.b])
    groups: Dict[int, List[Fraction]] = {}
    for v in points:
        groups.setdefault(uf.find(index[v]), []).append(v)
    classes = sorted(tuple(sorted(g)) for g in groups.values())
    hulls = []
    for cl in classes:
        if len(cl) < 2:
            continue
        hull = GapLeaf(tuple(cl))
        for e in hull.edges():
            if not is_proper(e, lam.degree):
                raise ImproperDetected(f"class hull edge {e} is improper")
        hulls.append(hull)
    return ClassPartition(classes=tuple(classes), hulls=tuple(hulls))


def preroot_qlamination(
    portrait: CriticalPortrait,
    depth: int,
    resolution: Optional[int] = None,
) -> Tuple[LaminationApprox, ClassPartition]:
    """The preroot leaf set: edges of the concatenation-class hulls."""
    prelam = preroot_prelamination(portrait, depth, resolution)
    part = concat_classes(prelam)
    leaves: Set[Chord] = set()
    for hull in part.hulls:
        leaves |= set(hull.edges())
    lam = LaminationApprox(
        degree=portrait.degree,
        depth=depth,
        resolution=resolution,
        leaves=tuple(sorted(leaves)),
        proper=all(is_proper(c, portrait.degree) for c in leaves),
        crossings_free=not _any_crossing(sorted(leaves)),
    )
    return lam, part
