"""Disk subdivision by pairwise non-crossing chords."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rootlam.circle import Chord, crosses, normalize, parse_chord
from rootlam.subdivision import FootprintIndex, Region, face_containing, subdivide


def F(num, den=1):
    return Fraction(num, den)


angles = st.fractions(min_value=0, max_value=1, max_denominator=24).map(normalize)


def noncrossing_chords(draw_pts):
    """Build a non-crossing family greedily from a point list."""
    out = []
    it = iter(draw_pts)
    for a, b in zip(it, it):
        if a == b:
            continue
        c = Chord(a, b)
        if any(crosses(c, o) for o in out) or c in out:
            continue
        out.append(c)
    return out


def test_empty_subdivision_is_the_whole_disk():
    regions = subdivide(())
    assert len(regions) == 1
    assert regions[0].whole
    assert regions[0].chords == ()


def test_single_chord_gives_two_faces():
    regions = subdivide((parse_chord("1/4-3/4"),))
    assert len(regions) == 2
    arcs = sorted(r.arcs[0] for r in regions)
    assert arcs == [(F(1, 4), F(3, 4)), (F(3, 4), F(1, 4))]
    for r in regions:
        assert r.chords == (parse_chord("1/4-3/4"),)


def test_shared_vertex_triangle_faces(conic):
    # chords 0-1/3 and 0-2/3 cut the disk into three faces
    regions = subdivide((parse_chord("0/1-1/3"), parse_chord("0/1-2/3")))
    assert len(regions) == 3
    samples = [F(1, 6), F(1, 2), F(5, 6)]
    found = {face_containing(regions, t).arcs[0] for t in samples}
    assert len(found) == 3


def test_two_disjoint_chords_give_band_and_caps():
    regions = subdivide((parse_chord("1/9-4/9"), parse_chord("5/9-8/9")))
    assert len(regions) == 3
    # the band between the chords has two arcs, one through 1/2, one through 0
    band = face_containing(regions, F(1, 2))
    assert len(band.chords) == 2
    assert face_containing(regions, F(0)) is band
    for t in (F(2, 9), F(2, 3)):
        cap = face_containing(regions, t)
        assert len(cap.chords) == 1


def test_face_containing_picks_the_enclosing_face():
    regions = subdivide((parse_chord("1/4-3/4"),))
    assert face_containing(regions, F(0)).arcs[0] == (F(3, 4), F(1, 4))
    assert face_containing(regions, F(1, 2)).arcs[0] == (F(1, 4), F(3, 4))


def test_footprint_contains_includes_boundary_vertices():
    regions = subdivide((parse_chord("1/4-3/4"),))
    r = face_containing(regions, F(1, 2))
    assert r.footprint_contains(F(1, 4))
    assert r.footprint_contains(F(1, 2))
    assert not r.footprint_contains(F(0))


def test_arc_interior_sample_lands_inside():
    regions = subdivide((parse_chord("1/4-3/4"), parse_chord("1/8-7/8")))
    for r in regions:
        t = r.arc_interior_sample()
        assert t is not None
        assert any(
            s == e or (normalize(t - s) < normalize(e - s))
            for s, e in r.arcs
        )


def test_boundary_items_trace_the_face():
    regions = subdivide((parse_chord("1/4-3/4"),))
    r = face_containing(regions, F(1, 2))
    kinds = [item[0] for item in r.boundary]
    assert kinds == ["arc", "chord"]
    # each boundary item ends where the next begins
    for i, item in enumerate(r.boundary):
        nxt = r.boundary[(i + 1) % len(r.boundary)]
        assert item[2] == nxt[1]


def test_footprint_index_agrees_with_direct_membership():
    regions = subdivide((parse_chord("1/8-3/8"), parse_chord("5/8-7/8")))
    for r in regions:
        idx = FootprintIndex(r)
        for t in (F(0), F(1, 4), F(1, 2), F(3, 4), F(1, 8), F(15, 16)):
            assert idx.contains(t) == r.footprint_contains(t)


@settings(max_examples=150)
@given(st.lists(angles, min_size=0, max_size=12))
def test_k_chords_give_k_plus_one_faces(pts):
    chords = noncrossing_chords(pts)
    regions = subdivide(tuple(chords))
    assert len(regions) == len(chords) + 1


@settings(max_examples=150)
@given(st.lists(angles, min_size=2, max_size=12))
def test_every_chord_borders_exactly_two_faces(pts):
    chords = noncrossing_chords(pts)
    regions = subdivide(tuple(chords))
    for c in chords:
        assert sum(c in r.chords for r in regions) == 2
