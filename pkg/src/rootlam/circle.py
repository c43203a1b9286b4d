"""Exact arithmetic on the circle R/Z for the angle d-tupling map.

Angles are `fractions.Fraction` values normalized to [0, 1).  Chords are
unordered endpoint pairs; a chord with equal endpoints is *degenerate* and
is kept as its own kind of object (several constructions below need it).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Tuple

from sympy import n_order

Angle = Fraction

__all__ = [
    "Angle",
    "Chord",
    "GapLeaf",
    "OrbitClass",
    "arc_contains",
    "arc_length",
    "chord",
    "classify_orbit",
    "crosses",
    "den_le",
    "format_angle",
    "format_chord",
    "image_hull",
    "in_open_arc",
    "is_critical",
    "is_periodic",
    "is_proper",
    "normalize",
    "orbit",
    "parse_angle",
    "parse_chord",
    "positively_oriented",
    "sigma",
]


def normalize(a: Fraction) -> Fraction:
    """Reduce an angle mod 1 into [0, 1)."""
    return Fraction(a.numerator % a.denominator, a.denominator)


def parse_angle(text: str) -> Fraction:
    """Parse "p/q" (or "p") into a normalized angle."""
    return normalize(Fraction(text.strip()))


def format_angle(a: Fraction) -> str:
    """Format an angle as "p/q"; 0 prints as "0/1" so the form is uniform."""
    return f"{a.numerator}/{a.denominator}"


def sigma(a: Fraction, d: int) -> Fraction:
    """One step of the angle d-tupling map t -> d*t mod 1."""
    return normalize(a * d)


def orbit(a: Fraction, d: int) -> Tuple[Fraction, ...]:
    """Forward orbit of `a` until the first repeat (repeat not included)."""
    seen = {}
    out = []
    t = normalize(a)
    while t not in seen:
        seen[t] = len(out)
        out.append(t)
        t = sigma(t, d)
    return tuple(out)


def is_periodic(a: Fraction, d: int) -> bool:
    """Periodic under d-tupling iff the reduced denominator is coprime to d."""
    return gcd(normalize(a).denominator, d) == 1


@dataclass(frozen=True)
class OrbitClass:
    """Exact orbit shape of a rational angle: preperiod steps, then a cycle."""

    kind: str  # "periodic" | "preperiodic"
    preperiod: int
    period: int


def classify_orbit(a: Fraction, d: int) -> OrbitClass:
    """Preperiod and eventual period of `a` under d-tupling.

    The preperiod is the number of times the denominator must shed factors
    shared with d; the period is the multiplicative order of d modulo the
    surviving denominator.
    """
    q = normalize(a).denominator
    pre = 0
    while (g := gcd(q, d)) != 1:
        q //= g
        pre += 1
    period = 1 if q == 1 else int(n_order(d, q))
    kind = "periodic" if pre == 0 else "preperiodic"
    return OrbitClass(kind=kind, preperiod=pre, period=period)


@dataclass(frozen=True, order=True)
class Chord:
    """Unordered pair of circle angles, stored with a <= b."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        a = normalize(self.a)
        b = normalize(self.b)
        if b < a:
            a, b = b, a
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def is_degenerate(self) -> bool:
        return self.a == self.b

    def endpoints(self) -> Tuple[Fraction, Fraction]:
        return (self.a, self.b)

    def image(self, d: int) -> "Chord":
        return Chord(sigma(self.a, d), sigma(self.b, d))

    def __repr__(self):
        return f"{format_angle(self.a)}-{format_angle(self.b)}"


def chord(x, y=None) -> Chord:
    """Build a chord from angles or strings; chord(x) is degenerate."""
    if y is None:
        y = x
    if isinstance(x, str):
        x = parse_angle(x)
    if isinstance(y, str):
        y = parse_angle(y)
    return Chord(Fraction(x), Fraction(y))


def parse_chord(text: str) -> Chord:
    a, b = text.strip().split("-")
    return Chord(parse_angle(a), parse_angle(b))


def format_chord(c: Chord) -> str:
    return f"{format_angle(c.a)}-{format_angle(c.b)}"


def in_open_arc(t: Fraction, lo: Fraction, hi: Fraction) -> bool:
    """Is t inside the open arc travelled counterclockwise from lo to hi?

    Empty when lo == hi (a degenerate arc has no interior).
    """
    t, lo, hi = normalize(t), normalize(lo), normalize(hi)
    if lo == hi:
        return False
    if lo < hi:
        return lo < t < hi
    return t > lo or t < hi


def arc_contains(t: Fraction, lo: Fraction, hi: Fraction, closed: bool = True) -> bool:
    """Membership in the counterclockwise arc from lo to hi."""
    t, lo, hi = normalize(t), normalize(lo), normalize(hi)
    if closed and (t == lo or t == hi):
        return True
    return in_open_arc(t, lo, hi)


def arc_length(lo: Fraction, hi: Fraction) -> Fraction:
    """Length of the counterclockwise arc from lo to hi (full circle -> 0)."""
    return normalize(hi - lo)


def crosses(c1: Chord, c2: Chord) -> bool:
    """Do the two chords cross in the open disk?

    Degenerate chords never cross anything; chords sharing an endpoint do
    not cross.  Otherwise they cross iff exactly one endpoint of c2 lies on
    the open arc between the endpoints of c1.
    """
    if c1.is_degenerate or c2.is_degenerate:
        return False
    if c1.a in c2.endpoints() or c1.b in c2.endpoints():
        return False
    return in_open_arc(c2.a, c1.a, c1.b) != in_open_arc(c2.b, c1.a, c1.b)


def is_critical(c: Chord, d: int) -> bool:
    """A chord is critical when both endpoints share one image point."""
    if c.is_degenerate:
        return False
    return sigma(c.a, d) == sigma(c.b, d)


@dataclass(frozen=True)
class GapLeaf:
    """Finitely many circle points with their convex hull implied.

    `vertices` is sorted strictly increasing.  One point is a degenerate
    hull, two points a chord, three or more a polygon.
    """

    vertices: Tuple[Fraction, ...]

    def __post_init__(self):
        vs = tuple(sorted({normalize(v) for v in self.vertices}))
        object.__setattr__(self, "vertices", vs)

    def edges(self) -> Tuple[Chord, ...]:
        """Hull edges between circularly consecutive vertices."""
        vs = self.vertices
        if len(vs) < 2:
            return ()
        if len(vs) == 2:
            return (Chord(vs[0], vs[1]),)
        return tuple(
            Chord(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))
        )

    def __repr__(self):
        return "{" + ",".join(format_angle(v) for v in self.vertices) + "}"


def image_hull(g, d: int):
    """Image of a point set under d-tupling, returned hull-style.

    Accepts an angle, a Chord, a GapLeaf or any iterable of angles; returns
    the matching kind (a Chord collapses to a degenerate Chord when
    critical, a GapLeaf may lose vertices).
    """
    if isinstance(g, Fraction):
        return sigma(g, d)
    if isinstance(g, Chord):
        return g.image(d)
    if isinstance(g, GapLeaf):
        return GapLeaf(tuple(sigma(v, d) for v in g.vertices))
    return GapLeaf(tuple(sigma(Fraction(v), d) for v in g))


def positively_oriented(vertices: Sequence[Fraction], d: int) -> bool:
    """Does d-tupling preserve the cyclic order of this vertex set?

    Each hole (arc between circularly consecutive vertices) must map into a
    hole of the image set (or collapse).
    """
    vs = sorted({normalize(v) for v in vertices})
    if len(vs) <= 2:
        return True
    img = [sigma(v, d) for v in vs]
    img_set = sorted(set(img))
    if len(img_set) == 1:
        return True

    def next_image(x: Fraction) -> Fraction:
        # smallest image point strictly after x in circular order
        for w in img_set:
            if w > x:
                return w
        return img_set[0]

    n = len(vs)
    for i in range(n):
        u, v = img[i], img[(i + 1) % n]
        if u == v:
            continue
        if next_image(u) != v:
            return False
    return True


def is_proper(c: Chord, d: int, horizon: Optional[int] = None) -> bool:
    """Walk the chord forward; decide whether its endpoints can share a class.

    Merged endpoints are fine.  Exactly one periodic endpoint dooms the
    chord; two periodic endpoints must have equal periods.  The walk always
    terminates (each step reduces denominators toward coprimality with d);
    `horizon` is accepted for interface compatibility and ignored.
    """
    x, y = c.a, c.b
    while True:
        if x == y:
            return True
        xp = is_periodic(x, d)
        yp = is_periodic(y, d)
        if xp and yp:
            return classify_orbit(x, d).period == classify_orbit(y, d).period
        if xp != yp:
            return False
        x, y = sigma(x, d), sigma(y, d)


def den_le(a: Fraction, n: Optional[int]) -> bool:
    """Denominator filter used by the resolution option (None = no filter)."""
    return n is None or normalize(a).denominator <= n
