"""Pullback chords relative to a critical portrait and iterated webs.

A chord {x, y} pulls back into each complementary component A of the
portrait through the fibers fib(t, A) = sigma^{-1}(t) restricted to the
closed circle footprint of A.  Generic fibers are single points and give
one chord per component; fibers at a collapse value consist of the
vertices of the collapsing boundary polygon and give one chord per vertex
pair.  Webs collect iterated pullbacks with generation stamps.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .circle import Chord, crosses, in_open_arc, is_critical, normalize
from .errors import ImageNotCovered
from .portrait import CriticalPortrait
from .subdivision import Region

__all__ = [
    "fiber",
    "fib",
    "pullbacks_into_component",
    "all_pullbacks",
    "sibling_pullbacks",
    "Web",
    "iterate_web",
    "verify_sibling_property",
]


@functools.lru_cache(maxsize=None)
def fiber(t: Fraction, d: int) -> Tuple[Fraction, ...]:
    """The d preimages of t under the degree-d map, sorted."""
    t = normalize(t)
    return tuple(sorted(normalize(Fraction(t + k, d)) for k in range(d)))


def fib(t: Fraction, region: Region, d: int) -> List[Fraction]:
    """Preimages of t lying on the closed footprint of the region."""
    return [u for u in fiber(t, d) if region.footprint_contains(u)]


def pullbacks_into_component(
    leaf: Chord, region: Region, portrait: CriticalPortrait
) -> Set[Chord]:
    """Pullback chords of a leaf into the closure of one component.

    Non-degenerate leaves give every chord from the fiber of one endpoint
    to the fiber of the other.  A degenerate leaf gives its fiber points
    plus any portrait chord joining two of them.

    Raises ImageNotCovered when an endpoint has no preimage on the
    component boundary (impossible for a full portrait).
    """
    d = portrait.degree
    if leaf.is_degenerate:
        pts = fib(leaf.a, region, d)
        if not pts:
            raise ImageNotCovered(f"{leaf.a} has no preimage on {region}")
        out = {Chord(u, u) for u in pts}
        for c in portrait.chords:
            if c.a in pts and c.b in pts:
                out.add(c)
        return out
    fx = fib(leaf.a, region, d)
    fy = fib(leaf.b, region, d)
    if not fx:
        raise ImageNotCovered(f"{leaf.a} has no preimage on {region}")
    if not fy:
        raise ImageNotCovered(f"{leaf.b} has no preimage on {region}")
    return {Chord(u, v) for u in fx for v in fy}


def all_pullbacks(leaf: Chord, portrait: CriticalPortrait) -> Set[Chord]:
    """Union of the pullbacks of a leaf into every component."""
    out: Set[Chord] = set()
    for region in portrait.faces:
        out |= pullbacks_into_component(leaf, region, portrait)
    return out


def _out_germ(region: Region, u: Fraction) -> bool:
    """Does the footprint leave u in the positive direction?"""
    for (s, e) in region.arcs:
        if s == e:
            continue
        if s == u or in_open_arc(u, s, e):
            return True
    return False


def _in_germ(region: Region, v: Fraction) -> bool:
    """Does the footprint arrive at v from the negative direction?"""
    for (s, e) in region.arcs:
        if s == e:
            continue
        if e == v or in_open_arc(v, s, e):
            return True
    return False


def _run_length(region: Region, u: Fraction, v: Fraction) -> Fraction:
    """Footprint length swept travelling from u to v counterclockwise."""
    span = normalize(v - u)
    total = Fraction(0)
    for (s, e) in region.arcs:
        if s == e:
            continue
        fs, fe = normalize(s - u), normalize(e - u)
        pieces = [(fs, fe)] if fs <= fe else [(fs, Fraction(1)), (Fraction(0), fe)]
        for (x, y) in pieces:
            if x < span:
                total += min(y, span) - x if min(y, span) > x else 0
    return total


def sibling_pullbacks(
    leaf: Chord, region: Region, portrait: CriticalPortrait
) -> Set[Chord]:
    """Side-consistent pullback chords of a proper leaf into one component.

    On an arc-bearing component the map collapsed along boundary chords
    is an orientation-preserving circle homeomorphism, so each side of
    the leaf has exactly one footprint run mapping onto its arc: it
    starts at the fiber point of one endpoint with an outgoing germ and
    ends at the fiber point of the other with an incoming germ.  This
    keeps at most two chords per component and drops the linked pairings
    that the full fiber product allows when a leaf endpoint is the
    collapse value of a boundary chord.
    """
    if leaf.is_degenerate:
        return pullbacks_into_component(leaf, region, portrait)
    if not any(s != e for (s, e) in region.arcs) and not region.whole:
        return set()  # collapse-polygon interior carries no proper preimage
    d = portrait.degree
    fx = fib(leaf.a, region, d)
    fy = fib(leaf.b, region, d)
    if not fx or not fy:
        raise ImageNotCovered(f"{leaf} has no preimage on {region}")
    out: Set[Chord] = set()
    for (a, b, fa, fb) in (
        (leaf.a, leaf.b, fx, fy),
        (leaf.b, leaf.a, fy, fx),
    ):
        starts = [u for u in fa if _out_germ(region, u)]
        ends = [v for v in fb if _in_germ(region, v)]
        assert len(starts) == 1 and len(ends) == 1, (
            f"side run of {leaf} not pinned on {region}"
        )
        u, v = starts[0], ends[0]
        if u == v:
            continue
        assert d * _run_length(region, u, v) == normalize(b - a), (
            f"run {u}..{v} does not cover the {a}->{b} side of {leaf}"
        )
        out.add(Chord(u, v))
    return out


@dataclass
class Web:
    """Iterated pullback chords with the smallest generation per chord."""

    degree: int
    stamps: Dict[Chord, int] = field(default_factory=dict)

    @property
    def chords(self) -> Set[Chord]:
        return set(self.stamps)

    def generation(self, k: int) -> Set[Chord]:
        return {c for c, g in self.stamps.items() if g == k}

    def add(self, c: Chord, gen: int) -> bool:
        """Record a chord; keeps the smaller stamp.  True if new."""
        old = self.stamps.get(c)
        if old is None:
            self.stamps[c] = gen
            return True
        if gen < old:
            self.stamps[c] = gen
        return False

    def __len__(self):
        return len(self.stamps)

    def __contains__(self, c: Chord):
        return c in self.stamps


def iterate_web(
    portrait: CriticalPortrait,
    depth: int,
    seeds: Optional[Iterable[Chord]] = None,
) -> Web:
    """Iterated pullbacks of the proper portrait polygons, depth generations.

    Generation 0 is the edge set of every proper polygon (portal-only
    portraits give an empty web); generation k+1 collects all pullbacks of
    generation-k chords.  Degenerate pullbacks are not stored.  `seeds`
    replaces the default generation 0.
    """
    web = Web(degree=portrait.degree)
    if seeds is None:
        gen0: List[Chord] = []
        for s in portrait.sets:
            if s.is_proper:
                gen0.extend(s.polygon.edges())
    else:
        gen0 = list(seeds)
    frontier = []
    for c in gen0:
        if web.add(c, 0):
            frontier.append(c)
    for k in range(1, depth + 1):
        nxt = []
        for c in sorted(frontier):
            for p in sorted(all_pullbacks(c, portrait)):
                if not p.is_degenerate and web.add(p, k):
                    nxt.append(p)
        frontier = nxt
        if not frontier:
            break
    return web


def _disjoint(c1: Chord, c2: Chord) -> bool:
    return not set(c1.endpoints()) & set(c2.endpoints()) and not crosses(c1, c2)


def verify_sibling_property(web: Web) -> dict:
    """Check every non-critical web chord extends to a sibling collection.

    A sibling collection is d pairwise disjoint chords (no shared
    endpoints, no crossings) with one common non-degenerate image.  Returns
    {"ok": bool, "violations": [...], "checked": n}.
    """
    d = web.degree
    chords = sorted(web.chords)
    by_image: Dict[Chord, List[Chord]] = {}
    for c in chords:
        by_image.setdefault(c.image(d), []).append(c)
    violations = []
    checked = 0
    for c in chords:
        if is_critical(c, d) or c.is_degenerate:
            continue
        checked += 1
        pool = by_image.get(c.image(d), [])
        candidates = [x for x in pool if x == c or _disjoint(x, c)]
        found = False
        for combo in itertools.combinations(candidates, d):
            if c not in combo:
                continue
            if all(
                _disjoint(u, v) for u, v in itertools.combinations(combo, 2)
            ):
                found = True
                break
        if not found:
            violations.append(c)
    return {"ok": not violations, "violations": violations, "checked": checked}
