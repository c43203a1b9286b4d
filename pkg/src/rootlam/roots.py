"""Root construction: straightening, tuning, primality, legality.

The preroot of a portrait that has portals usually stops short of the
root: a hyperbolic gap cycle carrying a portal can fail primality, with
a cycle period smaller than the portal's vertex period or with several
portal cycles crowded into one gap cycle.  Tuning repairs this.  The
cycle is straightened to a degree-m model circle, an invariant chord
family is located there by exhaustive scan over fixed-point pairs, and
its lift is inserted and spread through the portrait by proper-filtered
pullbacks.  Iterating until every portal sits in a prime cycle yields
the root lamination.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .circle import (
    Chord,
    GapLeaf,
    classify_orbit,
    crosses,
    is_periodic,
    is_proper,
    normalize,
    sigma,
)
from .errors import (
    DepthExhausted,
    ImproperDetected,
    Inconclusive,
    LaminationError,
    NotHyperbolic,
    PrimeCycle,
)
from .gaps import (
    Gap,
    GapCycle,
    extract_gaps,
    find_gap_containing,
    gap_orbits,
    leaf_side_cycle,
)
from .piles import (
    ClassPartition,
    LaminationApprox,
    _any_crossing,
    _resolution_filter,
    concat_classes,
    preroot_qlamination,
)
from .portrait import CriticalPortrait, PortraitSet, build_plus
from .pullback import sibling_pullbacks
from .subdivision import FootprintIndex
from .tiles import polygon_pullbacks, tiles

__all__ = [
    "PortalCycle",
    "portal_cycles",
    "polygon_in_gap",
    "CanonicalModel",
    "canonical_model",
    "induced_collection",
    "is_prime",
    "spread",
    "tune_cycle",
    "RootReport",
    "build_root",
    "check_legal",
    "critical_chords",
    "quadratic_portrait_chords",
    "enumerate_portraits",
    "atlas",
]


# ---------------------------------------------------------------------------
# portal cycles


@dataclass(frozen=True)
class PortalCycle:
    """All portal sets of a portrait whose periodic vertices share an orbit."""

    portals: Tuple[PortraitSet, ...]
    vertex_period: int

    @property
    def key(self) -> Fraction:
        return min(
            min(s.polygon.vertices) for s in self.portals
        )

    def __repr__(self):
        polys = ", ".join(repr(s.polygon) for s in self.portals)
        return f"PortalCycle(period={self.vertex_period}, [{polys}])"


def portal_cycles(portrait: CriticalPortrait) -> List[PortalCycle]:
    """Group the portal sets by the orbit of their periodic vertex.

    A Side portrait has no portals and gives an empty list.
    """
    d = portrait.degree
    groups: Dict[frozenset, List[PortraitSet]] = {}
    for s in portrait.portals:
        orb = frozenset(
            normalize(sigma_k)
            for sigma_k in _orbit_cycle(s.periodic_vertex, d)
        )
        groups.setdefault(orb, []).append(s)
    out = []
    for orb, sets in groups.items():
        out.append(
            PortalCycle(
                portals=tuple(sorted(sets, key=lambda s: s.polygon.vertices)),
                vertex_period=len(orb),
            )
        )
    return sorted(out, key=lambda pc: pc.key)


def _orbit_cycle(v: Fraction, d: int) -> Tuple[Fraction, ...]:
    assert is_periodic(v, d)
    out = [normalize(v)]
    t = sigma(v, d)
    while t != out[0]:
        out.append(t)
        t = sigma(t, d)
    return tuple(out)


# ---------------------------------------------------------------------------
# containment of a polygon in a gap


def polygon_in_gap(polygon: GapLeaf, gap: Gap) -> bool:
    """True when the polygon lies in the gap closure and meets its interior.

    Every vertex must sit on the closed footprint, no edge may cross a
    boundary leaf, and at least one edge must not itself be a boundary
    leaf (so the polygon is not just a piece of the boundary).
    """
    r = gap.region
    if not all(r.footprint_contains(v) for v in polygon.vertices):
        return False
    edges = polygon.edges()
    bnd = set(r.chords)
    if any(crosses(e, c) for e in edges for c in bnd):
        return False
    if r.whole:
        return True
    if edges and all(e in bnd for e in edges):
        return False
    return True


# ---------------------------------------------------------------------------
# canonical model of a hyperbolic gap cycle


@dataclass
class CanonicalModel:
    """Straightening of a degree-m gap cycle onto the m-tupling circle.

    Boundary leaf chains of the start gap collapse to single model
    points; psi conjugates the return map on the gap boundary to the
    m-tupling map, normalized so that the least fixed chain goes to 0.
    The whole-disk cycle straightens to the identity.
    """

    degree: int  # circle-side degree d
    m: int  # model degree
    period: int  # return power: the return map is sigma^period
    identity: bool
    footprint: Optional[FootprintIndex] = None
    base_start: Optional[Fraction] = None
    sector_offsets: Optional[List[Fraction]] = None
    classes: Tuple[Tuple[Fraction, ...], ...] = ()
    fixed_classes: Tuple[Tuple[Fraction, ...], ...] = ()
    cut_classes: Tuple[Tuple[Fraction, ...], ...] = ()

    def _digit(self, t: Fraction) -> int:
        p = normalize(t - self.base_start)
        return bisect_right(self.sector_offsets, p) - 1

    def _itinerary(self, t: Fraction) -> Optional[Tuple[List[int], int]]:
        """Digit stream of the return orbit, None when the orbit escapes."""
        seen: Dict[Fraction, int] = {}
        digits: List[int] = []
        x = normalize(t)
        while x not in seen:
            if not self.footprint.contains(x):
                return None
            seen[x] = len(digits)
            digits.append(self._digit(x))
            for _ in range(self.period):
                x = sigma(x, self.degree)
        return digits, seen[x]

    def psi(self, t: Fraction) -> Fraction:
        """Model coordinate of a point on the closed gap footprint."""
        if self.identity:
            return normalize(t)
        itin = self._itinerary(t)
        if itin is None:
            raise DepthExhausted(
                f"return orbit of {t} leaves the visible gap footprint"
            )
        digits, split = itin
        m = self.m
        pre, cyc = digits[:split], digits[split:]
        val = Fraction(0)
        for i, a in enumerate(pre):
            val += Fraction(a, m ** (i + 1))
        num = 0
        for a in cyc:
            num = num * m + a
        val += Fraction(num, m ** len(cyc) - 1) / (m ** split)
        return normalize(val)

    def psi_inv(self, x: Fraction) -> Fraction:
        """Least visible point whose model coordinate is x (periodic x only)."""
        x = normalize(x)
        if self.identity:
            return x
        assert is_periodic(x, self.m), "only periodic model points lift"
        q = classify_orbit(x, self.m).period
        n = self.degree ** (self.period * q) - 1
        if n > 10 ** 7:
            raise DepthExhausted(f"lift search space {n} too large")
        for j in range(n):
            t = Fraction(j, n)
            if not self.footprint.contains(t):
                continue
            itin = self._itinerary(t)
            if itin is None:
                continue
            digits, split = itin
            m = self.m
            val = Fraction(0)
            for i, a in enumerate(digits[:split]):
                val += Fraction(a, m ** (i + 1))
            num = 0
            for a in digits[split:]:
                num = num * m + a
            val += Fraction(num, m ** (len(digits) - split) - 1) / (m ** split)
            if normalize(val) == x:
                return t
        raise DepthExhausted(f"no visible lift of model point {x}")


def canonical_model(cycle: GapCycle, lam: LaminationApprox) -> CanonicalModel:
    """Straighten a hyperbolic gap cycle to its model m-tupling circle.

    Raises NotHyperbolic for a degree-1 cycle and DepthExhausted when
    the visible boundary shows fewer fixed or cut chains than the model
    demands (m - 1 fixed classes, m cut classes).
    """
    d = lam.degree
    m = cycle.return_degree
    if m <= 1:
        raise NotHyperbolic(f"cycle of return degree {m} has no model")
    n = cycle.period
    u0 = cycle.gaps[0]
    if u0.region.whole:
        assert m == d
        return CanonicalModel(degree=d, m=m, period=n, identity=True)

    verts = sorted(u0.vertices)
    index = {v: i for i, v in enumerate(verts)}
    parent = list(range(len(verts)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for c in u0.region.chords:
        ra, rb = find(index[c.a]), find(index[c.b])
        if ra != rb:
            parent[ra] = rb
    groups: Dict[int, List[Fraction]] = {}
    for v in verts:
        groups.setdefault(find(index[v]), []).append(v)
    classes = sorted(tuple(sorted(g)) for g in groups.values())
    class_of = {v: cl for cl in classes for v in cl}

    def ret(t: Fraction) -> Fraction:
        for _ in range(n):
            t = sigma(t, d)
        return t

    rho: Dict[Tuple[Fraction, ...], Tuple[Fraction, ...]] = {}
    for cl in classes:
        images = {ret(v) for v in cl}
        targets = set()
        for w in images:
            if w not in class_of:
                raise DepthExhausted(
                    f"boundary vertex image {w} is not a visible vertex"
                )
            targets.add(class_of[w])
        if len(targets) != 1:
            raise DepthExhausted(
                f"boundary chain {cl} returns onto several chains"
            )
        rho[cl] = targets.pop()

    fixed = [cl for cl in classes if rho[cl] == cl]
    assert len(fixed) <= m - 1, "more fixed chains than model fixed points"
    if len(fixed) < m - 1:
        raise DepthExhausted(
            f"only {len(fixed)} of {m - 1} fixed boundary chains visible"
        )
    base = min(fixed)
    cut = [cl for cl in classes if rho[cl] == base]
    assert len(cut) <= m, "more cut chains than model preimages of 0"
    if len(cut) < m:
        raise DepthExhausted(
            f"only {len(cut)} of {m} cut chains visible on the boundary"
        )

    def block_start(cl: Tuple[Fraction, ...]) -> Fraction:
        members = set(cl)
        starts = [
            v
            for v in cl
            if verts[(index[v] - 1) % len(verts)] not in members
        ]
        assert len(starts) == 1, f"boundary chain {cl} is not contiguous"
        return starts[0]

    base_start = block_start(base)
    offsets = sorted(normalize(block_start(cl) - base_start) for cl in cut)
    assert offsets[0] == 0

    return CanonicalModel(
        degree=d,
        m=m,
        period=n,
        identity=False,
        footprint=FootprintIndex(u0.region),
        base_start=base_start,
        sector_offsets=offsets,
        classes=tuple(classes),
        fixed_classes=tuple(fixed),
        cut_classes=tuple(sorted(cut)),
    )


# ---------------------------------------------------------------------------
# induced collection on the start gap


def induced_collection(
    cycle: GapCycle, portrait: CriticalPortrait
) -> List[Tuple[PortraitSet, GapLeaf]]:
    """Copies, on the start gap, of every critical set inside the cycle.

    A set sitting in gap j of the cycle is pulled back j steps along the
    cycle (one polygon pullback per step, pieces glued at shared fiber
    points).  The total criticality of the copies telescopes to the
    return degree: sum of (size - 1) over copies equals m - 1.
    """
    m = cycle.return_degree
    placed: List[Tuple[PortraitSet, int]] = []
    for s in portrait.sets:
        spots = [
            j for j, g in enumerate(cycle.gaps) if polygon_in_gap(s.polygon, g)
        ]
        assert len(spots) <= 1, "critical set inside two gaps of one cycle"
        if spots:
            placed.append((s, spots[0]))
    out: List[Tuple[PortraitSet, GapLeaf]] = []
    for s, j in placed:
        cur = [s.polygon]
        for i in range(j, 0, -1):
            nxt: List[GapLeaf] = []
            for poly in cur:
                nxt.extend(
                    polygon_pullbacks(poly, cycle.gaps[i - 1].region, portrait)
                )
            cur = sorted(set(nxt), key=lambda g: g.vertices)
            if not cur:
                raise DepthExhausted(
                    f"copy of {s.polygon} vanished while pulling back"
                )
        out.extend((s, copy) for copy in cur)
    total = sum(len(copy.vertices) - 1 for _, copy in out)
    assert total == m - 1, (
        f"induced criticality {total} does not telescope to {m - 1}"
    )
    return out


# ---------------------------------------------------------------------------
# primality


def is_prime(
    cycle: GapCycle,
    portrait: CriticalPortrait,
    pcycles: Optional[Sequence[PortalCycle]] = None,
) -> Tuple[bool, dict]:
    """Primality of a gap cycle together with a checkable certificate.

    Prime means: exactly one portal cycle sits inside the gap cycle, all
    of its portals placed, the cycle period equals the portal vertex
    period, and each degree-k gap of the cycle contains exactly one
    portal, a k-gon.  Without portals the question does not apply and
    the answer is false with an empty certificate.
    """
    if pcycles is None:
        pcycles = portal_cycles(portrait)
    if not pcycles:
        return False, {"applicable": False, "prime": False}
    contained = []
    for pc in pcycles:
        spots: Dict[int, List[PortraitSet]] = {}
        for s in pc.portals:
            for gi, g in enumerate(cycle.gaps):
                if polygon_in_gap(s.polygon, g):
                    spots.setdefault(gi, []).append(s)
                    break
        if spots:
            contained.append((pc, spots))
    cert: dict = {
        "applicable": True,
        "cycle_period": cycle.period,
        "return_degree": cycle.return_degree,
        "portal_cycles_contained": len(contained),
    }
    if len(contained) != 1:
        cert["prime"] = False
        return False, cert
    pc, spots = contained[0]
    placed = sum(len(v) for v in spots.values())
    cert["vertex_period"] = pc.vertex_period
    cert["portals_placed"] = placed
    ok = placed == len(pc.portals) and pc.vertex_period == cycle.period
    cert["period_match"] = pc.vertex_period == cycle.period
    checks = []
    for gi, k in enumerate(cycle.step_degrees):
        here = spots.get(gi, [])
        if k <= 1:
            good = not here
        else:
            good = len(here) == 1 and here[0].size == k
        checks.append(
            {"gap": gi, "degree": k, "portal_sizes": [s.size for s in here],
             "ok": good}
        )
        ok = ok and good
    cert["kgon_checks"] = checks
    cert["prime"] = ok
    return ok, cert


# ---------------------------------------------------------------------------
# spreading inserted leaves


def spread(
    portrait: CriticalPortrait,
    inserts: Sequence[Chord],
    depth: int,
    avoid: Sequence[Chord] = (),
) -> Set[Chord]:
    """Invariant closure of inserted leaves to the given pullback depth.

    Forward: the sigma-orbit of each insert until it repeats or
    collapses.  Backward: breadth-first rounds of side-consistent
    pullbacks into every portrait component, keeping proper
    non-degenerate chords that stay unlinked with the portrait, the
    chords in `avoid`, and everything already collected.
    """
    d = portrait.degree
    out: Set[Chord] = set()
    for c in inserts:
        x = c
        seen: Set[Chord] = set()
        while x not in seen and not x.is_degenerate:
            seen.add(x)
            out.add(x)
            x = x.image(d)
    ambient = list(portrait.chords) + list(avoid)
    frontier = sorted(out)
    for _ in range(depth):
        fresh: Set[Chord] = set()
        for c in frontier:
            for region in portrait.faces:
                for p in sibling_pullbacks(c, region, portrait):
                    if p.is_degenerate or p in out or p in fresh:
                        continue
                    if not is_proper(p, d):
                        continue
                    if any(crosses(p, q) for q in ambient):
                        continue
                    if any(crosses(p, q) for q in out):
                        continue
                    if any(crosses(p, q) for q in fresh):
                        continue
                    fresh.add(p)
        if not fresh:
            break
        out |= fresh
        frontier = sorted(fresh)
    return out


def _with_leaves(
    lam: LaminationApprox, extra: Sequence[Chord]
) -> Tuple[LaminationApprox, ClassPartition]:
    """A lamination with extra leaves merged in and chain hulls completed."""
    leaves = set(lam.leaves) | set(extra)
    for _ in range(2):
        ordered = sorted(leaves)
        merged = LaminationApprox(
            degree=lam.degree,
            depth=lam.depth,
            resolution=lam.resolution,
            leaves=tuple(ordered),
            proper=all(is_proper(c, lam.degree) for c in ordered),
            crossings_free=not _any_crossing(ordered),
        )
        part = concat_classes(merged)
        closed = set(leaves)
        for hull in part.hulls:
            closed |= set(hull.edges())
        if closed == leaves:
            return merged, part
        leaves = closed
    raise AssertionError("hull closure did not stabilize in one pass")


# ---------------------------------------------------------------------------
# tuning


def _carrier(
    lam: LaminationApprox, portrait: CriticalPortrait, pc: PortalCycle
) -> Optional[GapCycle]:
    """The gap cycle through the face holding the portal cycle's portal."""
    gaps = extract_gaps(lam)
    try:
        g = find_gap_containing(gaps, pc.portals[0].polygon)
    except ValueError:
        return None
    return leaf_side_cycle(gaps, g, portrait.degree)


def _lemma_tag(
    induced: Sequence[Tuple[PortraitSet, GapLeaf]], model: CanonicalModel
) -> str:
    """Which unfolding argument the scan realizes for this cycle."""
    portals = [(s, c) for s, c in induced if s.is_portal]
    if len(portals) > 1:
        return "several portal copies share the gap"
    s, _ = portals[0]
    vper = classify_orbit(s.periodic_vertex, model.degree).period
    if vper == model.period and s.size == model.m:
        return "single full-order portal with a fixed vertex"
    return "single portal short of full order"


def tune_cycle(
    lam: LaminationApprox,
    cycle: GapCycle,
    portrait: CriticalPortrait,
    pcycles: Optional[Sequence[PortalCycle]] = None,
) -> Tuple[LaminationApprox, ClassPartition, dict]:
    """Insert the invariant leaves that refine one non-prime gap cycle.

    With a proper critical copy inside the cycle, its hull edges are the
    insert.  Otherwise the cycle is straightened and pairs of model
    fixed points are scanned in lexicographic order; a candidate family
    must be forward invariant, non-degenerate, internally unlinked and
    unlinked with the induced copies, and its lift must refine the
    portal-carrying cycle so that the new period is a proper multiple
    (or the portal cycles split) while still dividing the vertex period.

    Raises PrimeCycle when there is nothing to do and Inconclusive when
    the scan exhausts all candidates.
    """
    d = portrait.degree
    if pcycles is None:
        pcycles = portal_cycles(portrait)
    prime, _ = is_prime(cycle, portrait, pcycles)
    if prime:
        raise PrimeCycle(f"{cycle!r} is already prime")
    induced = induced_collection(cycle, portrait)

    proper_copies = [copy for s, copy in induced if s.is_proper]
    if proper_copies:
        inserts = sorted({e for copy in proper_copies for e in copy.edges()})
        new = spread(portrait, inserts, lam.depth)
        lam2, part2 = _with_leaves(lam, new)
        return lam2, part2, {
            "lemma": "pullback of a proper critical copy",
            "period": cycle.period,
            "inserted": inserts,
        }

    model = canonical_model(cycle, lam)
    tag = _lemma_tag(induced, model)
    m = model.m
    pcs_here = [
        pc
        for pc in pcycles
        if any(
            any(polygon_in_gap(s.polygon, g) for g in cycle.gaps)
            for s in pc.portals
        )
    ]
    assert pcs_here, "tuning a cycle that carries no portal"

    hull_edges: List[Chord] = []
    for _, copy in induced:
        mverts = sorted({model.psi(v) for v in copy.vertices})
        if len(mverts) >= 2:
            hull_edges.extend(GapLeaf(tuple(mverts)).edges())

    bound = 1
    for pc in pcs_here:
        assert pc.vertex_period % cycle.period == 0
        bound = max(bound, pc.vertex_period // cycle.period)

    for p in range(1, bound + 1):
        q = m ** p - 1
        pts = [Fraction(j, q) for j in range(q)]
        for u, v in itertools.combinations(pts, 2):
            family = _chord_family(Chord(u, v), m)
            if family is None:
                continue
            if any(
                crosses(c1, c2)
                for c1, c2 in itertools.combinations(family, 2)
            ):
                continue
            if any(crosses(c, e) for c in family for e in hull_edges):
                continue
            lam2_part2 = _try_candidate(
                lam, portrait, model, Chord(u, v), cycle, pcs_here
            )
            if lam2_part2 is None:
                continue
            lam2, part2, lift = lam2_part2
            return lam2, part2, {
                "lemma": tag,
                "period": cycle.period,
                "model_degree": m,
                "model_pair": Chord(u, v),
                "inserted": [lift],
            }
    raise Inconclusive(
        f"no invariant model family tunes {cycle!r} at this depth"
    )


def _chord_family(c: Chord, m: int) -> Optional[List[Chord]]:
    """Forward orbit of a model chord, None when it ever collapses."""
    out: List[Chord] = []
    seen: Set[Chord] = set()
    x = c
    while x not in seen:
        if x.is_degenerate:
            return None
        seen.add(x)
        out.append(x)
        x = x.image(m)
    return out


def _try_candidate(
    lam: LaminationApprox,
    portrait: CriticalPortrait,
    model: CanonicalModel,
    pair: Chord,
    cycle: GapCycle,
    pcs_here: Sequence[PortalCycle],
) -> Optional[Tuple[LaminationApprox, ClassPartition, Chord]]:
    """Lift, insert and vet one model candidate; None rejects it."""
    d = portrait.degree
    try:
        lift = Chord(model.psi_inv(pair.a), model.psi_inv(pair.b))
    except DepthExhausted:
        return None
    if lift.is_degenerate or not is_proper(lift, d):
        return None
    if any(crosses(lift, leaf) for leaf in lam.leaves):
        return None
    if any(crosses(lift, c) for c in portrait.chords):
        return None
    new = spread(portrait, [lift], lam.depth, avoid=lam.leaves)
    merged = sorted(set(lam.leaves) | new)
    if _any_crossing(merged):
        return None
    try:
        lam2, part2 = _with_leaves(lam, new)
    except ImproperDetected:
        return None
    carriers = []
    for pc in pcs_here:
        cyc2 = _carrier(lam2, portrait, pc)
        if cyc2 is None:
            return None
        if cyc2.period % cycle.period != 0:
            return None
        if pc.vertex_period % cyc2.period != 0:
            return None
        carriers.append(cyc2)
    grew = any(c.period > cycle.period for c in carriers)
    keys = {c.gaps[0].vertices for c in carriers}
    split = len(pcs_here) > 1 and len(keys) > 1
    if not (grew or split):
        return None
    return lam2, part2, lift


# ---------------------------------------------------------------------------
# the root


@dataclass
class RootReport:
    """Everything build_root derived: lamination, cycles, certificates."""

    portrait: CriticalPortrait
    depth: int
    resolution: Optional[int]
    lamination: LaminationApprox
    partition: ClassPartition
    preroot: LaminationApprox
    cycles: Tuple[GapCycle, ...]
    portal_cycles: Tuple[PortalCycle, ...]
    certificates: Tuple[dict, ...]
    tuning_log: Tuple[dict, ...]
    tile_generations: int
    tiles: Tuple[Tuple[GapLeaf, int], ...]
    legal: bool


def build_root(
    portrait: CriticalPortrait,
    depth: int,
    resolution: Optional[int] = None,
    tile_generations: int = 2,
    max_rounds: int = 32,
) -> RootReport:
    """The root lamination of a portrait, with its full audit trail.

    Starts from the preroot and tunes the first portal cycle whose
    carrier is not prime, in portal order, until all are prime.  The
    optional resolution bound filters the reported leaves only; tuning
    always runs at full depth.
    """
    d = portrait.degree
    preroot, part = preroot_qlamination(portrait, depth, None)
    lam = preroot
    pcycles = tuple(portal_cycles(portrait))
    log: List[dict] = []
    rounds = 0
    carriers: List[GapCycle] = []
    while True:
        gaps = extract_gaps(lam)
        certs = []
        carriers = []
        work: Optional[GapCycle] = None
        for pc in pcycles:
            try:
                g = find_gap_containing(gaps, pc.portals[0].polygon)
            except ValueError:
                raise DepthExhausted(
                    f"portal {pc.portals[0].polygon} sits in no single gap"
                )
            carrier = leaf_side_cycle(gaps, g, d)
            if carrier is None:
                raise DepthExhausted(
                    f"portal gap of {pc!r} is not on a resolved cycle"
                )
            prime, cert = is_prime(carrier, portrait, pcycles)
            certs.append(cert)
            carriers.append(carrier)
            if not prime and work is None:
                work = carrier
        if work is None:
            break
        if rounds >= max_rounds:
            raise DepthExhausted(f"tuning open after {max_rounds} rounds")
        old_period = work.period
        lam, part, entry = tune_cycle(lam, work, portrait, pcycles)
        entry["round"] = rounds
        log.append(entry)
        rounds += 1
        new_carrier = _carrier(lam, portrait, pcycles[0]) if pcycles else None
        if new_carrier is not None:
            assert new_carrier.period % old_period == 0

    for s in portrait.sets:
        if s.is_proper and lam.leaves:
            cls = {part.class_of(v) for v in s.polygon.vertices}
            assert len(cls) == 1 and None not in cls, (
                f"proper set {s.polygon} split across classes"
            )

    legal = check_legal(portrait, lam)
    out_lam = lam
    if resolution is not None:
        kept = _resolution_filter(lam.leaves, resolution)
        out_lam, part = _with_leaves(
            LaminationApprox(
                degree=d,
                depth=depth,
                resolution=resolution,
                leaves=tuple(sorted(kept)),
                proper=all(is_proper(c, d) for c in kept),
                crossings_free=not _any_crossing(sorted(kept)),
            ),
            (),
        )
    tls = tuple(tiles(portrait, tile_generations)) if tile_generations else ()
    # vertex-image matching misses cycles whose faces interleave two
    # pullback families, so fold the walked carriers back in
    cycles = list(gap_orbits(extract_gaps(lam), d))
    known = {tuple(sorted(g.vertices for g in c.gaps)) for c in cycles}
    for c in carriers:
        key = tuple(sorted(g.vertices for g in c.gaps))
        if key not in known:
            known.add(key)
            cycles.append(c)
    return RootReport(
        portrait=portrait,
        depth=depth,
        resolution=resolution,
        lamination=out_lam,
        partition=part,
        preroot=preroot,
        cycles=tuple(cycles),
        portal_cycles=pcycles,
        certificates=tuple(certs),
        tuning_log=tuple(log),
        tile_generations=tile_generations,
        tiles=tls,
        legal=legal,
    )


# ---------------------------------------------------------------------------
# legality


def check_legal(portrait: CriticalPortrait, lam: LaminationApprox) -> bool:
    """Whether a lamination is legal for a portrait.

    Two conditions: no portrait chord crosses a leaf, and every critical
    chord with a periodic endpoint of period n sits inside a gap of a
    period-n hyperbolic cycle in which each degree-k gap contains
    exactly k - 1 of the portrait's critical chords.
    """
    d = portrait.degree
    assert lam.degree == d
    for c in portrait.chords:
        for leaf in lam.leaves:
            if crosses(c, leaf):
                return False
    periodic = [
        (c, classify_orbit(v, d).period)
        for c in portrait.chords
        for v in c.endpoints()
        if is_periodic(v, d)
    ]
    if not periodic:
        return True
    gaps = extract_gaps(lam)
    for c, n in periodic:
        poly = GapLeaf((c.a, c.b))
        try:
            g = find_gap_containing(gaps, poly)
        except ValueError:
            return False
        cyc = leaf_side_cycle(gaps, g, d)
        if cyc is None or cyc.period != n or cyc.return_degree <= 1:
            return False
        for gi, k in enumerate(cyc.step_degrees):
            inside = [
                cc
                for cc in portrait.chords
                if polygon_in_gap(GapLeaf((cc.a, cc.b)), cyc.gaps[gi])
            ]
            if len(inside) != k - 1:
                return False
    return True


# ---------------------------------------------------------------------------
# the atlas


def critical_chords(degree: int, max_den: int = 12) -> List[Chord]:
    """All degree-d critical chords with both endpoint denominators bounded."""
    out: Set[Chord] = set()
    for den in range(1, max_den + 1):
        for num in range(den):
            if gcd(num, den) != 1:
                continue
            a = Fraction(num, den)
            for k in range(1, degree):
                b = normalize(a + Fraction(k, degree))
                if b.denominator <= max_den:
                    out.add(Chord(a, b))
    return sorted(out)


def quadratic_portrait_chords(max_den: int = 12) -> List[Chord]:
    """All degree-2 critical chords with both endpoint denominators bounded."""
    return critical_chords(2, max_den)


def enumerate_portraits(degree: int, max_den: int = 12) -> List[CriticalPortrait]:
    """Every valid degree-d portrait made of bounded critical chords.

    Selections of d - 1 chords that are duplicated, linked, or chained
    into a cyclic endpoint graph drop out in validation.
    """
    out: List[CriticalPortrait] = []
    for combo in itertools.combinations(critical_chords(degree, max_den), degree - 1):
        try:
            out.append(build_plus(list(combo), degree))
        except LaminationError:
            continue
    return out


def _atlas_entry(
    job: Tuple[CriticalPortrait, int]
) -> Tuple[Optional[RootReport], Optional[dict]]:
    """One atlas cell: the root report, or a diagnostic when the build fails."""
    portrait, depth = job
    try:
        return build_root(portrait, depth, tile_generations=0), None
    except LaminationError as exc:
        return None, {"error": type(exc).__name__, "message": str(exc)}


def atlas(max_den: int = 12, depth: int = 8, degree: int = 2, jobs: int = 1) -> dict:
    """Roots and the legality classes of all bounded degree-d portraits.

    Builds the root of every portrait whose critical chords have
    endpoint denominators at most max_den, tests every portrait against
    every distinct root, and groups the legal pairs into classes: two
    pairs are equivalent when they share the portrait or the lamination,
    transitively.  A portrait whose build fails keeps a diagnostic row
    and drops out of the pairing.  jobs > 1 builds cells in parallel;
    the output ordering is canonical either way.
    """
    portraits = enumerate_portraits(degree, max_den)
    work = [(p, depth) for p in portraits]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(_atlas_entry, work))
    else:
        entries = [_atlas_entry(w) for w in work]
    reports = [rep for rep, _ in entries]
    lam_keys: List[Tuple[Chord, ...]] = []
    lams: List[LaminationApprox] = []
    root_index: List[Optional[int]] = []
    for rep, _ in entries:
        if rep is None:
            root_index.append(None)
            continue
        key = rep.lamination.leaves
        if key not in lam_keys:
            lam_keys.append(key)
            lams.append(rep.lamination)
        root_index.append(lam_keys.index(key))
    pairs = [
        (i, j)
        for i in range(len(portraits))
        for j in range(len(lams))
        if check_legal(portraits[i], lams[j])
    ]
    parent = list(range(len(pairs)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for x in range(len(pairs)):
        for y in range(x + 1, len(pairs)):
            if pairs[x][0] == pairs[y][0] or pairs[x][1] == pairs[y][1]:
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[rx] = ry
    member: Dict[int, List[Tuple[int, int]]] = {}
    for x, pr in enumerate(pairs):
        member.setdefault(find(x), []).append(pr)
    classes = sorted(
        (sorted(v) for v in member.values()), key=lambda c: (-len(c), c)
    )
    classification = []
    for i, (rep, err) in enumerate(entries):
        row: dict = {"portrait": portraits[i].chords, "root": root_index[i]}
        if rep is None:
            row.update(side=None, portal_periods=None, prime=None, legal=None,
                       error=err)
        else:
            row.update(
                side=not rep.portal_cycles,
                portal_periods=[pc.vertex_period for pc in rep.portal_cycles],
                prime=(
                    all(c.get("prime", False) for c in rep.certificates)
                    if rep.certificates else None
                ),
                legal=rep.legal,
                error=None,
            )
        classification.append(row)
    return {
        "degree": degree,
        "max_denominator": max_den,
        "depth": depth,
        "portraits": [p.chords for p in portraits],
        "roots": root_index,
        "laminations": lams,
        "reports": reports,
        "classification": classification,
        "legal_pairs": pairs,
        "classes": classes,
        "class_sizes": [len(c) for c in classes],
    }
