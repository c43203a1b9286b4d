"""Gap extraction, orbit matching, and gap classification.

Gaps of a finite lamination approximation are the faces of the disk cut
along the leaves.  True infinite gaps of the ideal object are flagged
"infinite-candidate" when their vertex set grew relative to the matched
face at the previous depth.  Orbit matching relies on the image of a
depth-k gap's vertex set landing on vertices of the depth-k target face:
the target is the unique face whose closed footprint carries the image
polygon without boundary crossings, with arc-image sweeps breaking the
tie when the image polygon degenerates onto a shared boundary leaf.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .circle import (
    Chord,
    GapLeaf,
    crosses,
    in_open_arc,
    is_periodic,
    normalize,
    sigma,
)
from .errors import Inconclusive, OrbitEscapesHorizon
from .piles import ClassPartition, LaminationApprox, concat_classes
from .subdivision import FootprintIndex, Region, face_containing, subdivide

__all__ = [
    "Gap",
    "GapCycle",
    "GapClass",
    "extract_gaps",
    "boundary_step_degree",
    "gap_orbits",
    "leaf_side_cycle",
    "orbit_next_map",
    "classify_gap",
    "detect_capture",
    "classify_satellite",
    "kiwi_guard",
    "find_gap_containing",
]


@dataclass(frozen=True)
class Gap:
    """One face of the leaf subdivision, with growth bookkeeping."""

    region: Region
    kind: str = "finite"  # "finite" | "infinite-candidate"
    prev_vertices: Optional[Tuple[Fraction, ...]] = None

    @property
    def vertices(self) -> Tuple[Fraction, ...]:
        return self.region.vertices

    @property
    def edges(self) -> Tuple[Chord, ...]:
        return self.region.chords

    def __repr__(self):
        flag = "*" if self.kind == "infinite-candidate" else ""
        return f"Gap{flag}({','.join(str(v) for v in self.vertices)})"


_ARC_OFFSETS = (
    Fraction(1, 2),
    Fraction(1, 3),
    Fraction(2, 3),
    Fraction(1, 5),
    Fraction(2, 5),
    Fraction(3, 5),
    Fraction(4, 5),
    Fraction(1, 7),
    Fraction(3, 7),
    Fraction(5, 7),
)


def _arc_samples(region: Region):
    for (s, e) in region.arcs:
        span = normalize(e - s)
        if span == 0:
            span = Fraction(1)  # lone-vertex or whole-disk boundary arc
        for off in _ARC_OFFSETS:
            yield normalize(s + span * off)


def extract_gaps(
    lam: LaminationApprox, prev: Optional[LaminationApprox] = None
) -> List[Gap]:
    """Faces of the disk cut along the leaves, flagged by vertex growth.

    With a previous (coarser) approximation, each face is matched to the
    previous face containing one of its arc points; a strictly larger
    vertex set flags the gap infinite-candidate.  Without one, only the
    whole-disk face of an empty lamination is flagged.
    """
    assert lam.crossings_free, "gap extraction needs a crossings-free input"
    regions = subdivide(lam.leaves)
    prev_regions = subdivide(prev.leaves) if prev is not None else None
    gaps = []
    for r in regions:
        kind = "finite"
        prev_vs: Optional[Tuple[Fraction, ...]] = None
        if r.whole:
            kind = "infinite-candidate"
        if prev_regions is not None:
            for t in _arc_samples(r):
                try:
                    pr = face_containing(prev_regions, t)
                except ValueError:
                    continue
                prev_vs = pr.vertices
                if len(prev_vs) < len(r.vertices) or pr.whole:
                    kind = "infinite-candidate"
                break
        gaps.append(Gap(region=r, kind=kind, prev_vertices=prev_vs))
    return gaps


def boundary_step_degree(gap: Gap, d: int) -> int:
    """Degree of the map on the gap boundary, by total image winding.

    Traversing the boundary counterclockwise, an arc of length L displaces
    the image by d*L (several full turns allowed) and a chord jump u -> v
    displaces it by (sigma(v) - sigma(u)) mod 1; collapsing critical edges
    contribute zero.  The total is the covering degree.  A face with no
    boundary chords spans the whole circle and gets degree d.
    """
    if gap.region.whole or not gap.region.chords:
        return d
    total = Fraction(0)
    for item in gap.region.boundary:
        if item[0] == "arc":
            total += d * normalize(item[2] - item[1])
        else:
            total += normalize(sigma(item[2], d) - sigma(item[1], d))
    assert total.denominator == 1, f"non-integer boundary winding {total}"
    return max(1, int(total))


def _image_arc_intervals(
    region: Region, d: int
) -> Tuple[bool, List[Tuple[Fraction, Fraction]]]:
    """Closed intervals swept by the images of the footprint arcs."""
    ivs: List[Tuple[Fraction, Fraction]] = []
    for (s, e) in region.arcs:
        span = Fraction(1) if s == e else normalize(e - s)
        if span * d >= 1:
            return True, []
        a = sigma(s, d)
        b = a + span * d
        if b <= 1:
            ivs.append((a, b))
        else:
            ivs.append((a, Fraction(1)))
            ivs.append((Fraction(0), b - 1))
    return False, ivs


def _image_target(
    gap: Gap,
    regions: Sequence[Region],
    d: int,
    indexes: Optional[Sequence[FootprintIndex]] = None,
) -> Tuple[Optional[int], bool]:
    """Index of the face the gap maps onto, plus hull-verification flag."""
    r = gap.region
    if r.whole:
        for j, reg in enumerate(regions):
            if reg.whole:
                return j, True
        return None, False
    if indexes is None:
        indexes = [FootprintIndex(reg) for reg in regions]
    image = sorted({sigma(v, d) for v in r.vertices})
    if len(image) < 2:
        # all boundary vertices collapse; no gap image to follow
        return None, False
    poly = GapLeaf(tuple(image))
    edges = poly.edges()
    candidates = []
    for j, reg in enumerate(regions):
        if not all(indexes[j].contains(v) for v in image):
            continue
        if any(crosses(e, c) for e in edges for c in reg.chords):
            continue
        candidates.append(j)
    if not candidates:
        return None, False
    if len(candidates) == 1:
        return candidates[0], True
    # the image polygon degenerated onto a boundary leaf shared by several
    # faces; the true target is swept by the arc images
    whole_img, ivs = _image_arc_intervals(r, d)

    def covered(t: Fraction) -> bool:
        return whole_img or any(a <= t <= b for a, b in ivs)

    best = []
    for j in candidates:
        mids = []
        for (s, e) in regions[j].arcs:
            span = Fraction(1) if s == e else normalize(e - s)
            mids.append(normalize(s + span / 2))
        if mids and all(covered(m) for m in mids):
            best.append(j)
    if len(best) == 1:
        return best[0], True
    return None, False


def orbit_next_map(
    gaps: Sequence[Gap], d: int
) -> Tuple[Dict[int, Optional[int]], Dict[int, bool]]:
    """next-face index and hull-verified flag for every gap."""
    regions = [g.region for g in gaps]
    indexes = [FootprintIndex(r) for r in regions]
    nxt: Dict[int, Optional[int]] = {}
    verified: Dict[int, bool] = {}
    for i, g in enumerate(gaps):
        j, ok = _image_target(g, regions, d, indexes)
        nxt[i] = j
        verified[i] = ok
    return nxt, verified


@dataclass(frozen=True)
class GapCycle:
    """A periodic cycle of gaps under the forward matching."""

    gaps: Tuple[Gap, ...]
    period: int
    return_degree: int
    step_degrees: Tuple[int, ...]
    escapes: Tuple[int, ...] = ()  # cycle positions whose hull check failed

    def __repr__(self):
        return (
            f"GapCycle(period={self.period}, degree={self.return_degree}, "
            f"start={self.gaps[0]!r})"
        )


def gap_orbits(
    gaps: Sequence[Gap], d: int, strict: bool = False
) -> List[GapCycle]:
    """Find all periodic gap cycles under the forward matching.

    In strict mode a failed hull verification on a cycle raises
    OrbitEscapesHorizon; otherwise the positions are recorded on the
    cycle.
    """
    nxt, verified = orbit_next_map(gaps, d)
    seen_cycles: Set[frozenset] = set()
    cycles: List[GapCycle] = []
    for start in range(len(gaps)):
        path: List[int] = []
        pos: Dict[int, int] = {}
        i: Optional[int] = start
        while i is not None and i not in pos:
            pos[i] = len(path)
            path.append(i)
            i = nxt[i]
        if i is None:
            continue
        cyc = path[pos[i]:]
        key = frozenset(cyc)
        if key in seen_cycles:
            continue
        seen_cycles.add(key)
        # canonical rotation: start at the least vertex tuple
        k = min(range(len(cyc)), key=lambda j: gaps[cyc[j]].vertices)
        cyc = cyc[k:] + cyc[:k]
        steps = tuple(boundary_step_degree(gaps[j], d) for j in cyc)
        degree = 1
        for s in steps:
            degree *= s
        escapes = tuple(p for p, j in enumerate(cyc) if not verified[j])
        if strict and escapes:
            raise OrbitEscapesHorizon(
                f"hull verification failed at cycle positions {escapes}"
            )
        cycles.append(
            GapCycle(
                gaps=tuple(gaps[j] for j in cyc),
                period=len(cyc),
                return_degree=degree,
                step_degrees=steps,
                escapes=escapes,
            )
        )
    return sorted(cycles, key=lambda c: c.gaps[0].vertices)


def leaf_side_cycle(
    gaps: Sequence[Gap], start: Gap, d: int, limit: int = 4096
) -> Optional[GapCycle]:
    """The gap cycle through a face, walked by boundary-leaf adjacency.

    The image of the face adjacent to leaf L on one side is the face
    adjacent to sigma(L) on the image side, and sigma preserves the
    local orientation at a leaf, so an ordered endpoint pair carries the
    side across the step.  Unlike vertex-image matching this walk never
    looks at the deep end of the boundary, so it survives two pullback
    families interleaving faster than the depth horizon resolves them.

    Returns None when the start face is strictly preperiodic, a tracked
    leaf collapses, or no face repeat shows up within the step limit.
    """
    if start.region.whole:
        return GapCycle(
            gaps=(start,), period=1, return_degree=d, step_degrees=(d,)
        )
    if not start.region.chords:
        return None
    byedge: Dict[Chord, List[Gap]] = {}
    for g in gaps:
        for c in g.region.chords:
            byedge.setdefault(c, []).append(g)
    leaf = min(start.region.chords)
    t = start.region.arc_interior_sample()
    assert t is not None, "a chord-bounded face has an arc interior"
    u, v = (leaf.a, leaf.b) if in_open_arc(t, leaf.a, leaf.b) else (leaf.b, leaf.a)
    chain: List[Gap] = []
    seen: Dict[int, int] = {}
    g = start
    for _ in range(limit):
        if id(g) in seen:
            if seen[id(g)] != 0:
                return None
            steps = tuple(boundary_step_degree(x, d) for x in chain)
            degree = 1
            for s in steps:
                degree *= s
            return GapCycle(
                gaps=tuple(chain),
                period=len(chain),
                return_degree=degree,
                step_degrees=steps,
            )
        seen[id(g)] = len(chain)
        chain.append(g)
        u, v = sigma(u, d), sigma(v, d)
        if u == v:
            return None
        nxt = None
        for cand in byedge.get(Chord(u, v), ()):
            s = cand.region.arc_interior_sample()
            if s is not None and in_open_arc(s, u, v):
                nxt = cand
                break
        if nxt is None:
            return None
        g = nxt
    return None


@dataclass(frozen=True)
class GapClass:
    """Classification of a periodic gap cycle."""

    label: str  # "finite" | "Siegel" | "caterpillar" | "hyperbolic"
    degree: int
    satellite: Optional[bool] = None
    inconclusive: bool = False


def classify_gap(
    cycle: GapCycle, d: int, require_stable: bool = False
) -> GapClass:
    """Classify a gap cycle from its return degree and periodic vertices.

    With require_stable, an infinite-candidate cycle whose periodic-vertex
    picture changed since the previous depth raises Inconclusive.
    """
    degree = cycle.return_degree
    g0 = cycle.gaps[0]
    growing = any(g.kind == "infinite-candidate" for g in cycle.gaps)
    periodic_now = any(is_periodic(v, d) for v in g0.vertices)
    if require_stable and growing and g0.prev_vertices is not None:
        periodic_prev = any(is_periodic(v, d) for v in g0.prev_vertices)
        if periodic_prev != periodic_now:
            raise Inconclusive(
                "periodic-vertex structure changed in the last depth step"
            )
    if degree > 1:
        return GapClass(label="hyperbolic", degree=degree)
    if growing:
        label = "caterpillar" if periodic_now else "Siegel"
        return GapClass(label=label, degree=1)
    return GapClass(label="finite", degree=1)


def detect_capture(lam: LaminationApprox, gaps: Sequence[Gap]) -> bool:
    """Is there a growing non-periodic gap of local degree > 1?"""
    d = lam.degree
    nxt, _ = orbit_next_map(gaps, d)
    in_cycle: Set[int] = set()
    for start in range(len(gaps)):
        path: List[int] = []
        pos: Dict[int, int] = {}
        i: Optional[int] = start
        while i is not None and i not in pos:
            pos[i] = len(path)
            path.append(i)
            i = nxt[i]
        if i is not None:
            in_cycle |= set(path[pos[i]:])
    for i, g in enumerate(gaps):
        if i in in_cycle or g.kind != "infinite-candidate":
            continue
        if boundary_step_degree(g, d) > 1:
            return True
    return False


def _set_period(vertices: Iterable[Fraction], d: int) -> Optional[int]:
    """Least p with sigma^p(V) == V as a set, or None if V is preperiodic."""
    start = frozenset(normalize(v) for v in vertices)
    cur = start
    seen = {start: 0}
    for k in range(1, 4096):
        cur = frozenset(sigma(v, d) for v in cur)
        if cur == start:
            return k
        if cur in seen:
            return None
        seen[cur] = k
    raise AssertionError("set orbit did not close")


def classify_satellite(
    cycle: GapCycle,
    lam: LaminationApprox,
    partition: Optional[ClassPartition] = None,
) -> bool:
    """Does a boundary class recur with period strictly below the cycle's?"""
    if partition is None:
        partition = concat_classes(lam)
    d = lam.degree
    for g in cycle.gaps:
        for e in g.edges:
            cl = partition.class_of(e.a)
            if cl is None:
                continue
            p = _set_period(cl, d)
            if p is not None and p < cycle.period:
                return True
    return False


def kiwi_guard(
    lam: LaminationApprox, gaps: Optional[Sequence[Gap]] = None
) -> dict:
    """Check that no stable finite gap wanders with more than d vertices.

    A violation needs a finite gap with > d vertices whose vertex set
    never shrinks under iteration and whose forward hull crosses a leaf
    before the set repeats.  Exact rational data always terminates in a
    shrink or a repeat.
    """
    d = lam.degree
    if gaps is None:
        gaps = extract_gaps(lam)
    violations = []
    checked = 0
    for g in gaps:
        vs = g.vertices
        if g.kind != "finite" or len(vs) <= d:
            continue
        checked += 1
        cur = frozenset(vs)
        seen = {cur}
        crossed = False
        wandering = False
        for _ in range(4096):
            nxt = frozenset(sigma(v, d) for v in cur)
            if len(nxt) < len(cur):
                break  # precritical: collapses somewhere forward
            if nxt in seen:
                wandering = crossed  # repeated without ever losing a vertex
                break
            hull = GapLeaf(tuple(sorted(nxt)))
            if any(
                crosses(e, leaf) for e in hull.edges() for leaf in lam.leaves
            ):
                crossed = True
            seen.add(nxt)
            cur = nxt
        else:
            raise AssertionError("vertex-set orbit did not terminate")
        if wandering:
            violations.append(vs)
    return {"ok": not violations, "violations": violations, "checked": checked}


def find_gap_containing(gaps: Sequence[Gap], polygon: GapLeaf) -> Gap:
    """The unique gap whose closure contains the given polygon."""
    vs = polygon.vertices
    hits = []
    for g in gaps:
        if all(g.region.footprint_contains(v) for v in vs):
            if any(
                crosses(e, b) for e in polygon.edges() for b in g.region.chords
            ):
                continue
            hits.append(g)
    if len(hits) != 1:
        raise ValueError(
            f"polygon {polygon} contained in {len(hits)} gaps, expected 1"
        )
    return hits[0]
