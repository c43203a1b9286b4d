"""Leaf pullbacks, sibling selection, and the pullback web."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rootlam.circle import Chord, crosses, image_hull, normalize, parse_chord, sigma
from rootlam.errors import ImageNotCovered
from rootlam.portrait import build_plus
from rootlam.pullback import (
    Web,
    all_pullbacks,
    fib,
    fiber,
    iterate_web,
    pullbacks_into_component,
    sibling_pullbacks,
    verify_sibling_property,
)
from rootlam.subdivision import face_containing, subdivide


def F(num, den=1):
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# oracle: fibers and componentwise pullbacks computed from first principles


def fiber_oracle(t, d):
    return sorted(normalize(F(t + k, d)) for k in range(d))


def component_pullback_oracle(leaf, region, d):
    """Full fiber product of the endpoint fibers restricted to the region."""
    fx = [u for u in fiber_oracle(leaf.a, d) if region.footprint_contains(u)]
    fy = [v for v in fiber_oracle(leaf.b, d) if region.footprint_contains(v)]
    return {Chord(u, v) for u in fx for v in fy}


angles = st.fractions(min_value=0, max_value=1, max_denominator=24).map(normalize)

# module-level portrait for hypothesis tests; function fixtures do not mix
# with @given
CHEB = build_plus([parse_chord("1/4-3/4")], 2)


# ---------------------------------------------------------------------------
# fibers


def test_fiber_examples():
    assert fiber(F(1, 2), 2) == (F(1, 4), F(3, 4))
    assert fiber(F(0), 3) == (F(0), F(1, 3), F(2, 3))


@given(angles, st.integers(min_value=2, max_value=5))
def test_fiber_matches_oracle_and_maps_back(t, d):
    f = fiber(t, d)
    assert list(f) == fiber_oracle(t, d)
    assert all(sigma(u, d) == t for u in f)


def test_fib_restricts_to_the_region(cheb):
    face = face_containing(cheb.faces, F(1, 2))
    assert fib(F(0), face, 2) == [F(1, 2)]
    assert fib(F(1, 2), face, 2) == [F(1, 4), F(3, 4)]


# ---------------------------------------------------------------------------
# componentwise pullbacks


def test_pullbacks_shared_fiber_vertex(cheb):
    # both preimages of 1/2 sit on this face, one preimage of 0 does
    face = face_containing(cheb.faces, F(1, 2))
    got = pullbacks_into_component(parse_chord("0/1-1/2"), face, cheb)
    assert got == {parse_chord("1/4-1/2"), parse_chord("1/2-3/4")}


def test_pullbacks_single_chord_case(cheb):
    face = face_containing(cheb.faces, F(0))
    got = pullbacks_into_component(parse_chord("1/3-2/3"), face, cheb)
    assert got == {parse_chord("1/6-5/6")}


def test_all_pullbacks_of_the_fixed_leaf(cheb):
    got = all_pullbacks(parse_chord("1/3-2/3"), cheb)
    assert got == {parse_chord("1/3-2/3"), parse_chord("1/6-5/6")}


def test_degenerate_leaf_pullbacks():
    p = build_plus([parse_chord("1/9-4/9"), parse_chord("5/9-8/9")], 3)
    got = all_pullbacks(Chord(F(1, 3), F(1, 3)), p)
    want = {
        Chord(F(1, 9), F(1, 9)),
        Chord(F(4, 9), F(4, 9)),
        Chord(F(7, 9), F(7, 9)),
        parse_chord("1/9-4/9"),
    }
    assert got == want


def test_missing_preimage_raises(cheb):
    # a region cut from a foreign subdivision misses both preimages of 0
    small = face_containing(subdivide((parse_chord("1/16-1/8"),)), F(3, 32))
    with pytest.raises(ImageNotCovered):
        pullbacks_into_component(parse_chord("0/1-1/2"), small, cheb)


@settings(max_examples=150)
@given(angles, angles)
def test_component_pullbacks_match_fiber_product_oracle(a, b):
    leaf = Chord(a, b)
    if leaf.is_degenerate:
        return
    for face in CHEB.faces:
        got = pullbacks_into_component(leaf, face, CHEB)
        assert got == component_pullback_oracle(leaf, face, 2)


@settings(max_examples=100)
@given(angles, angles, st.integers(min_value=2, max_value=4))
def test_pullbacks_map_forward_onto_the_leaf(a, b, d):
    leaf = Chord(a, b)
    if leaf.is_degenerate:
        return
    chords = [Chord(F(k, d), F(k + 1, d)) for k in range(d - 1)]
    p = build_plus(chords, d)
    for c in all_pullbacks(leaf, p):
        assert {sigma(c.a, d), sigma(c.b, d)} == {leaf.a, leaf.b}


# ---------------------------------------------------------------------------
# sibling selection


def test_siblings_match_full_product_on_caps(two_portal_cubic):
    leaf = parse_chord("0/1-1/2")
    for face in two_portal_cubic.faces:
        if len(face.chords) == 1:
            raw = pullbacks_into_component(leaf, face, two_portal_cubic)
            assert sibling_pullbacks(leaf, face, two_portal_cubic) == raw


def test_siblings_resolve_crossing_on_the_band(two_portal_cubic):
    # the raw fiber product on the two-arc band contains crossing pairs;
    # the side-consistent selection keeps one chord per footprint run
    leaf = parse_chord("0/1-1/2")
    band = next(f for f in two_portal_cubic.faces if len(f.chords) == 2)
    raw = pullbacks_into_component(leaf, band, two_portal_cubic)
    sib = sibling_pullbacks(leaf, band, two_portal_cubic)
    assert any(crosses(c1, c2) for c1 in raw for c2 in raw)
    assert sib == {parse_chord("0/1-5/6"), parse_chord("1/3-1/2")}
    assert not any(crosses(c1, c2) for c1 in sib for c2 in sib)


def test_siblings_keep_at_most_two_per_component(basilica, cheb):
    leaf = parse_chord("1/3-2/3")
    for p in (basilica, cheb):
        for face in p.faces:
            assert len(sibling_pullbacks(leaf, face, p)) <= 2


def test_quadratic_siblings_equal_full_product(cheb):
    # one portal chord per face leaves nothing to disambiguate in degree 2
    for s in ("1/3-2/3", "0/1-1/2", "1/7-2/7"):
        leaf = parse_chord(s)
        for face in cheb.faces:
            assert sibling_pullbacks(leaf, face, cheb) == pullbacks_into_component(
                leaf, face, cheb
            )


# ---------------------------------------------------------------------------
# the web


def test_web_seeds_are_the_proper_chords(cheb):
    w = iterate_web(cheb, 0)
    assert dict(w.stamps) == {parse_chord("1/4-3/4"): 0}


def test_web_one_round(cheb):
    w = iterate_web(cheb, 1)
    assert {str(c): g for c, g in w.stamps.items()} == {
        "1/4-3/4": 0,
        "1/8-7/8": 1,
        "3/8-5/8": 1,
    }


def test_portal_only_portrait_has_an_empty_web(basilica):
    assert dict(iterate_web(basilica, 2).stamps) == {}


def test_web_is_backward_closed(cheb):
    # every pullback of a web chord is a web chord one generation later
    w = iterate_web(cheb, 3)
    horizon = max(w.stamps.values())
    for c, gen in w.stamps.items():
        if gen >= horizon:
            continue
        for pb in all_pullbacks(c, cheb):
            assert w.stamps.get(pb) is not None


def test_web_is_forward_closed(cheb):
    # the image of a generation g > 0 chord sits in generation g - 1
    w = iterate_web(cheb, 3)
    for c, gen in w.stamps.items():
        if gen == 0:
            continue
        img = image_hull(c, 2)
        assert isinstance(img, Chord)
        assert w.stamps[img] == gen - 1


def test_sibling_property_holds_on_real_webs(cheb):
    proper_cubic = build_plus([parse_chord("1/9-4/9"), parse_chord("5/9-8/9")], 3)
    for p, depth in ((cheb, 3), (proper_cubic, 2)):
        res = verify_sibling_property(iterate_web(p, depth))
        assert res["ok"] and res["violations"] == []
        assert res["checked"] > 0


def test_sibling_property_vacuous_on_seed_web(cheb):
    res = verify_sibling_property(iterate_web(cheb, 0))
    assert res == {"ok": True, "violations": [], "checked": 0}


def test_sibling_property_flags_a_missing_sibling(cheb):
    # drop one generation-2 chord from a good web and re-verify
    w = iterate_web(cheb, 2)
    broken = Web(degree=2)
    victim = parse_chord("3/16-5/16")
    assert victim in w.stamps
    for c, gen in w.stamps.items():
        if c != victim:
            broken.add(c, gen)
    res = verify_sibling_property(broken)
    assert not res["ok"]
    assert res["violations"]
