"""Faces of the closed disk cut along a finite set of non-crossing chords.

The subdivision is computed from the rotation system at each boundary
vertex: around a vertex w the outgoing half-edges in counterclockwise
order are the boundary arc leaving w, then the chords sorted by how far
their far endpoint sits counterclockwise from w, then (virtually) the arc
arriving at w.  Tracing next = predecessor-of-reverse walks every face
once.  Circle arcs carry a single half-edge (there is no outer face).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .circle import Chord, arc_contains, in_open_arc, normalize

__all__ = ["Region", "subdivide", "face_containing", "FootprintIndex"]

ArcItem = Tuple[str, Fraction, Fraction]  # ("arc", start, end) ccw


@dataclass(frozen=True)
class Region:
    """One face: its boundary items in counterclockwise trace order.

    Items are ("arc", s, e) for a circle arc from s to e, or
    ("chord", u, v) for a chord crossed from u to v.  `whole` marks the
    full disk (empty chord set), whose boundary is the single arc 0 -> 0.
    An isolated vertex v on the boundary shows up as consecutive arcs
    ... -> v -> ... with no chord at v.
    """

    boundary: Tuple[Tuple, ...]
    whole: bool = False

    def _lone_full_arc(self) -> bool:
        # a single boundary arc v -> v wraps the whole circle
        return (
            len(self.boundary) == 1
            and self.boundary[0][0] == "arc"
            and self.boundary[0][1] == self.boundary[0][2]
        )

    @property
    def vertices(self) -> Tuple[Fraction, ...]:
        vs = set()
        for item in self.boundary:
            if item[0] == "arc":
                vs.add(item[1])
                vs.add(item[2])
            else:
                vs.add(item[1])
                vs.add(item[2])
        if self.whole:
            return ()
        return tuple(sorted(vs))

    @property
    def arcs(self) -> Tuple[Tuple[Fraction, Fraction], ...]:
        return tuple((i[1], i[2]) for i in self.boundary if i[0] == "arc")

    @property
    def chords(self) -> Tuple[Chord, ...]:
        out = {Chord(i[1], i[2]) for i in self.boundary if i[0] == "chord"}
        return tuple(sorted(out))

    def footprint_contains(self, t: Fraction, closed: bool = True) -> bool:
        """Is the circle point t on this region's boundary circle set?

        The closed footprint is the union of the closed boundary arcs plus
        any isolated vertices.
        """
        t = normalize(t)
        if self.whole or self._lone_full_arc():
            return True if closed else t != self.boundary[0][1] or self.whole
        for (s, e) in self.arcs:
            if closed and arc_contains(t, s, e):
                return True
            if not closed and in_open_arc(t, s, e):
                return True
        if closed and t in self.vertices:
            return True
        return False

    def arc_interior_sample(self) -> Optional[Fraction]:
        """Midpoint of the longest boundary arc (None if no arc interior)."""
        best = None
        best_len = None
        for (s, e) in self.arcs:
            length = normalize(e - s)
            if s == e:
                length = Fraction(1)  # single-vertex boundary wraps fully
            if best_len is None or length > best_len:
                best_len = length
                best = normalize(s + length / 2)
        return best

    def __repr__(self):
        if self.whole:
            return "Region(disk)"
        bits = []
        for item in self.boundary:
            tag = "a" if item[0] == "arc" else "c"
            bits.append(f"{tag}[{item[1]},{item[2]}]")
        return "Region(" + " ".join(bits) + ")"


class FootprintIndex:
    """Closed circle footprint of a region with bisect membership.

    Wrapping arcs are split at 0 so intervals are sorted and disjoint.
    """

    __slots__ = ("everything", "starts", "ends", "verts")

    def __init__(self, region: Region):
        self.everything = region.whole
        ivs: List[Tuple[Fraction, Fraction]] = []
        for kind, s, e in region.boundary:
            if kind != "arc":
                continue
            if s == e:
                self.everything = True
            elif e > s:
                ivs.append((s, e))
            else:
                ivs.append((s, Fraction(1)))
                ivs.append((Fraction(0), e))
        ivs.sort()
        self.starts = [iv[0] for iv in ivs]
        self.ends = [iv[1] for iv in ivs]
        self.verts = set(region.vertices)

    def contains(self, t: Fraction) -> bool:
        if self.everything:
            return True
        if t in self.verts:
            return True
        i = bisect.bisect_right(self.starts, t) - 1
        return i >= 0 and t <= self.ends[i]


def _canonical(items: List[Tuple]) -> Tuple[Tuple, ...]:
    # rotate the cyclic item list so the lexicographically least item leads
    n = len(items)
    best = min(range(n), key=lambda i: items[i:] + items[:i])
    return tuple(items[best:] + items[:best])


def subdivide(chords: Iterable[Chord]) -> Tuple[Region, ...]:
    """All faces of the disk cut along the given (non-crossing) chords.

    Degenerate chords contribute a boundary vertex but no cut.  The result
    is sorted canonically.
    """
    cs = []
    verts = set()
    for c in chords:
        verts.add(c.a)
        verts.add(c.b)
        if not c.is_degenerate:
            cs.append(c)
    cs = sorted(set(cs))

    if not verts:
        full = Region(boundary=(("arc", Fraction(0), Fraction(0)),), whole=True)
        return (full,)

    vlist = sorted(verts)
    nv = len(vlist)
    vindex = {v: i for i, v in enumerate(vlist)}

    # half edges: ("chord", u, v) directed u->v ; ("arc", i) the ccw arc
    # from vlist[i] to vlist[i+1]; ("rarc", i) its virtual reverse.
    def arc_of(i):
        return ("arc", i)

    def reverse(h):
        if h[0] == "chord":
            return ("chord", h[2], h[1])
        if h[0] == "arc":
            return ("rarc", h[1])
        return ("arc", h[1])

    # rotation: outgoing slots at each vertex, ccw starting from the
    # outgoing boundary arc.
    slots: Dict[Fraction, List[Tuple]] = {}
    for i, w in enumerate(vlist):
        out = [arc_of(i)]
        incident = [c for c in cs if w in (c.a, c.b)]
        def delta(c):
            other = c.b if c.a == w else c.a
            return normalize(other - w)
        for c in sorted(incident, key=delta):
            other = c.b if c.a == w else c.a
            out.append(("chord", w, other))
        out.append(("rarc", (i - 1) % nv))
        slots[w] = out

    def head(h):
        # vertex the half edge points at
        if h[0] == "chord":
            return h[2]
        if h[0] == "arc":
            return vlist[(h[1] + 1) % nv]
        return vlist[h[1]]

    def nxt(h):
        w = head(h)
        s = slots[w]
        r = reverse(h)
        i = s.index(r)
        return s[(i - 1) % len(s)]

    visited = set()
    regions = []
    starts = [("arc", i) for i in range(nv)]
    starts += [("chord", c.a, c.b) for c in cs]
    starts += [("chord", c.b, c.a) for c in cs]
    for h0 in starts:
        if h0 in visited:
            continue
        walk = []
        h = h0
        while h not in visited:
            visited.add(h)
            walk.append(h)
            h = nxt(h)
        items = []
        for h in walk:
            if h[0] == "arc":
                i = h[1]
                items.append(("arc", vlist[i], vlist[(i + 1) % nv]))
            elif h[0] == "rarc":
                # a face never traverses the virtual reverse of an arc
                raise AssertionError("reverse arc traversed")
            else:
                items.append(("chord", h[1], h[2]))
        regions.append(Region(boundary=_canonical(items)))
    return tuple(sorted(regions, key=lambda r: r.boundary))


def face_containing(regions: Sequence[Region], t: Fraction) -> Region:
    """The unique face whose open boundary arcs contain the point t.

    t must not be a vertex of the subdivision.
    """
    t = normalize(t)
    for r in regions:
        if r.whole or (r._lone_full_arc() and t != r.boundary[0][1]):
            return r
        for (s, e) in r.arcs:
            if in_open_arc(t, s, e):
                return r
    raise ValueError(f"{t} is a vertex or not on any face arc")
