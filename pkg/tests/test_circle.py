"""Angle arithmetic, chord geometry, and orbit bookkeeping."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rootlam.circle import (
    Chord,
    GapLeaf,
    arc_contains,
    arc_length,
    classify_orbit,
    crosses,
    den_le,
    format_angle,
    format_chord,
    image_hull,
    in_open_arc,
    is_critical,
    is_periodic,
    is_proper,
    normalize,
    orbit,
    parse_angle,
    parse_chord,
    positively_oriented,
    sigma,
)


def F(num, den=1):
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# oracles


def crossing_oracle(c1: Chord, c2: Chord) -> bool:
    """Chords cross iff their endpoints strictly alternate around the circle.

    Sort the four endpoints and check the two chords interleave; any shared
    endpoint disqualifies.  Independent of the arc helpers under test.
    """
    pts = {c1.a, c1.b, c2.a, c2.b}
    if len(pts) < 4:
        return False
    ring = sorted(pts)
    owners = [0 if t in (c1.a, c1.b) else 1 for t in ring]
    return owners in ([0, 1, 0, 1], [1, 0, 1, 0])


def orientation_oracle(vertices, d) -> bool:
    """At most one strict descent when reading the images cyclically."""
    imgs = [sigma(v, d) for v in sorted(vertices)]
    descents = sum(
        1 for i in range(len(imgs)) if imgs[i] > imgs[(i + 1) % len(imgs)]
    )
    return descents <= 1


angles = st.fractions(min_value=0, max_value=1, max_denominator=32).map(normalize)


def distinct_angles(n):
    return st.lists(angles, min_size=n, max_size=n, unique=True)


# ---------------------------------------------------------------------------
# normalization and parsing


def test_normalize_wraps_into_unit_interval():
    assert normalize(F(5, 4)) == F(1, 4)
    assert normalize(F(-1, 4)) == F(3, 4)
    assert normalize(F(1)) == F(0)


def test_parse_and_format_angle():
    assert parse_angle("3/4") == F(3, 4)
    assert format_angle(F(0)) == "0/1"
    assert format_angle(F(1, 2)) == "1/2"


def test_parse_and_format_chord():
    c = parse_chord("1/6-2/3")
    assert c == Chord(F(1, 6), F(2, 3))
    assert format_chord(c) == "1/6-2/3"


@given(angles)
def test_angle_string_round_trip(t):
    assert parse_angle(format_angle(t)) == t


@given(distinct_angles(2))
def test_chord_string_round_trip(pair):
    c = Chord(*pair)
    assert parse_chord(format_chord(c)) == c


def test_chord_endpoints_are_sorted():
    assert Chord(F(2, 3), F(1, 6)) == Chord(F(1, 6), F(2, 3))


# ---------------------------------------------------------------------------
# the d-tupling map


def test_sigma_doubles_and_wraps():
    assert sigma(F(1, 3), 2) == F(2, 3)
    assert sigma(F(2, 3), 2) == F(1, 3)
    assert sigma(F(3, 4), 2) == F(1, 2)
    assert sigma(F(1, 2), 3) == F(1, 2)


def test_orbit_of_one_seventh():
    assert orbit(F(1, 7), 2) == (F(1, 7), F(2, 7), F(4, 7))


def test_is_periodic_iff_denominator_coprime_to_degree():
    assert is_periodic(F(1, 7), 2)
    assert is_periodic(F(1, 3), 2)
    assert not is_periodic(F(1, 6), 2)
    assert not is_periodic(F(1, 2), 2)
    assert is_periodic(F(1, 2), 3)


def test_classify_orbit_periodic_and_preperiodic():
    oc = classify_orbit(F(1, 7), 2)
    assert (oc.kind, oc.preperiod, oc.period) == ("periodic", 0, 3)
    oc = classify_orbit(F(1, 12), 2)
    assert (oc.kind, oc.preperiod, oc.period) == ("preperiodic", 2, 2)
    oc = classify_orbit(F(0), 2)
    assert (oc.kind, oc.preperiod, oc.period) == ("periodic", 0, 1)


@given(angles, st.integers(min_value=2, max_value=5))
def test_classify_orbit_consistent_with_iteration(t, d):
    oc = classify_orbit(t, d)
    u = t
    for _ in range(oc.preperiod):
        u = sigma(u, d)
    v = u
    for _ in range(oc.period):
        v = sigma(v, d)
    assert v == u
    assert is_periodic(t, d) == (oc.preperiod == 0)


# ---------------------------------------------------------------------------
# arcs and crossing


def test_arc_length_is_ccw_distance():
    assert arc_length(F(1, 4), F(3, 4)) == F(1, 2)
    assert arc_length(F(3, 4), F(1, 4)) == F(1, 2)
    assert arc_length(F(0), F(1, 8)) == F(1, 8)
    assert arc_length(F(1, 8), F(0)) == F(7, 8)


def test_arc_membership_open_vs_closed():
    assert arc_contains(F(1, 4), F(3, 4), F(1, 4))
    assert not in_open_arc(F(1, 4), F(1, 4), F(3, 4))
    assert in_open_arc(F(1, 2), F(1, 4), F(3, 4))
    assert not in_open_arc(F(7, 8), F(1, 4), F(3, 4))
    # wrapping arc through 0
    assert in_open_arc(F(15, 16), F(3, 4), F(1, 4))
    assert arc_contains(F(3, 4), F(1, 4), F(0))


def test_crossing_examples():
    assert crosses(parse_chord("1/8-3/8"), parse_chord("1/4-1/2"))
    assert not crosses(parse_chord("1/8-3/8"), parse_chord("1/2-3/4"))
    # a shared endpoint never counts as a crossing
    assert not crosses(parse_chord("0/1-1/3"), parse_chord("0/1-2/3"))


@given(distinct_angles(4))
def test_crossing_matches_alternation_oracle(pts):
    a, b, u, v = pts
    c1, c2 = Chord(a, b), Chord(u, v)
    assert crosses(c1, c2) == crossing_oracle(c1, c2)


@given(distinct_angles(4))
def test_crossing_is_symmetric(pts):
    a, b, u, v = pts
    c1, c2 = Chord(a, b), Chord(u, v)
    assert crosses(c1, c2) == crosses(c2, c1)


# ---------------------------------------------------------------------------
# critical chords and properness


def test_critical_chord_examples():
    assert is_critical(Chord(F(0), F(1, 2)), 2)
    assert is_critical(Chord(F(1, 6), F(2, 3)), 2)
    assert not is_critical(Chord(F(1, 6), F(1, 2)), 2)
    assert is_critical(Chord(F(0), F(1, 3)), 3)
    assert is_critical(Chord(F(0), F(2, 3)), 3)
    assert not is_critical(Chord(F(0), F(1, 2)), 3)


@given(distinct_angles(2), st.integers(min_value=2, max_value=5))
def test_critical_iff_difference_is_multiple_of_one_over_d(pair, d):
    a, b = pair
    expected = (normalize(b - a) * d).denominator == 1
    assert is_critical(Chord(a, b), d) == expected


def test_properness_examples():
    # the basilica portal has a periodic endpoint: improper
    assert not is_proper(Chord(F(1, 6), F(2, 3)), 2)
    assert is_proper(Chord(F(1, 3), F(2, 3)), 2)
    assert is_proper(Chord(F(1, 4), F(3, 4)), 2)
    assert not is_proper(Chord(F(1, 5), F(7, 10)), 2)


# ---------------------------------------------------------------------------
# image hulls and orientation


def test_image_hull_of_chord_and_polygon():
    assert image_hull(parse_chord("1/3-2/3"), 2) == parse_chord("1/3-2/3")
    assert image_hull(parse_chord("1/8-7/8"), 2) == parse_chord("1/4-3/4")
    got = image_hull(GapLeaf((F(0), F(1, 4), F(1, 2))), 2)
    assert got == GapLeaf((F(0), F(1, 2)))


@given(distinct_angles(3), st.integers(min_value=2, max_value=4))
def test_image_hull_vertices_are_vertexwise_images(pts, d):
    poly = GapLeaf(tuple(sorted(pts)))
    hull = image_hull(poly, d)
    want = {sigma(v, d) for v in pts}
    if isinstance(hull, GapLeaf):
        assert set(hull.vertices) == want
    elif isinstance(hull, Chord):
        assert {hull.a, hull.b} == want
    else:
        assert {hull} == want


def test_orientation_examples():
    assert positively_oriented([F(1, 7), F(2, 7), F(4, 7)], 2)
    assert not positively_oriented([F(0), F(1, 4), F(1, 2), F(2, 3)], 2)
    # collapsing pairs do not break the cyclic order
    assert positively_oriented([F(1, 6), F(2, 3)], 2)
    assert positively_oriented([F(0), F(1, 3), F(2, 3)], 3)


@settings(max_examples=200)
@given(st.lists(angles, min_size=2, max_size=6, unique=True), st.integers(2, 4))
def test_orientation_matches_descent_oracle(pts, d):
    assert positively_oriented(sorted(pts), d) == orientation_oracle(pts, d)


def test_denominator_bound_filter():
    assert den_le(F(1, 3), 6)
    assert den_le(F(5, 6), 6)
    assert not den_le(F(5, 6), 5)
    assert den_le(F(5, 6), None)
