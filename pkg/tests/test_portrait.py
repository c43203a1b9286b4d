"""Critical portrait validation and the P-plus set structure."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rootlam.circle import (
    Chord,
    arc_length,
    crosses,
    is_periodic,
    normalize,
    sigma,
)
from rootlam.errors import Duplicate, LaminationError, Linked, NotCritical
from rootlam.portrait import (
    build_plus,
    classify_sets,
    endpoint_components,
    is_portrait,
    validate_collection,
)
from rootlam.subdivision import subdivide


def F(num, den=1):
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# oracle: a collection is full iff every face of the subdivision it cuts
# carries total arc length exactly 1/d, so each face maps once over the
# circle.  Computed from raw arc lengths, independent of build_plus.


def fullness_oracle(chords, d) -> bool:
    for face in subdivide(tuple(chords)):
        total = sum(
            F(1) if s == e else normalize(e - s) for s, e in face.arcs
        )
        if total != F(1, d):
            return False
    return True


def critical_chord_strategy(d):
    base = st.fractions(min_value=0, max_value=1, max_denominator=16).map(normalize)
    return st.tuples(base, st.integers(min_value=1, max_value=d - 1)).map(
        lambda ab: Chord(ab[0], normalize(ab[0] + F(ab[1], d)))
    )


def collections(d):
    return st.lists(
        critical_chord_strategy(d), min_size=d - 1, max_size=d - 1, unique=True
    ).filter(
        lambda cs: all(
            not crosses(cs[i], cs[j])
            for i in range(len(cs))
            for j in range(i + 1, len(cs))
        )
    )


# ---------------------------------------------------------------------------
# validation


def test_validate_accepts_basilica_and_conic(basilica, conic):
    validate_collection(list(basilica.chords), 2)
    validate_collection(list(conic.chords), 3)


def test_duplicate_chord_is_rejected():
    c = Chord(F(0), F(1, 3))
    with pytest.raises(Duplicate):
        build_plus([c, c], 3)


def test_linked_chords_are_rejected():
    with pytest.raises(Linked):
        build_plus([Chord(F(0), F(1, 3)), Chord(F(1, 6), F(1, 2))], 3)


def test_noncritical_chord_is_rejected():
    with pytest.raises(NotCritical):
        build_plus([Chord(F(0), F(1, 2))], 3)


def test_wrong_chord_count_is_rejected():
    with pytest.raises(LaminationError):
        build_plus([Chord(F(0), F(1, 4))], 4)
    with pytest.raises(LaminationError):
        build_plus([], 2)


def test_cyclic_endpoint_graph_is_rejected():
    loop = [
        Chord(F(0), F(1, 4)),
        Chord(F(1, 4), F(3, 4)),
        Chord(F(0), F(3, 4)),
    ]
    with pytest.raises(LaminationError):
        build_plus(loop, 4)


def test_is_portrait_mirrors_validation():
    assert is_portrait([Chord(F(0), F(1, 3)), Chord(F(1, 3), F(2, 3))], 3)
    assert not is_portrait([Chord(F(0), F(1, 3))] * 2, 3)


def test_endpoint_components_group_shared_endpoints():
    comps = endpoint_components(
        [Chord(F(0), F(1, 3)), Chord(F(0), F(2, 3)), Chord(F(1, 2), F(5, 6))]
    )
    sizes = sorted(len(c) for c in comps)
    assert sizes == [1, 2]


# ---------------------------------------------------------------------------
# P-plus sets


def test_basilica_set_is_a_portal(basilica):
    (s,) = basilica.sets
    assert s.polygon.vertices == (F(1, 6), F(2, 3))
    assert s.image == F(1, 3)
    assert s.periodic_vertex == F(2, 3)


def test_conic_sets_merge_into_one_triangle(conic):
    (s,) = conic.sets
    assert s.polygon.vertices == (F(0), F(1, 3), F(2, 3))
    assert s.image == F(0)
    assert s.periodic_vertex == F(0)


def test_two_portal_cubic_has_two_fixed_portals(two_portal_cubic):
    got = [(s.polygon.vertices, s.image, s.periodic_vertex) for s in two_portal_cubic.sets]
    assert got == [
        ((F(0), F(1, 3)), F(0), F(0)),
        ((F(1, 2), F(5, 6)), F(1, 2), F(1, 2)),
    ]


def test_classify_sets_rows(basilica, conic):
    (row,) = classify_sets(basilica)
    assert row == {
        "vertices": [F(1, 6), F(2, 3)],
        "size": 2,
        "image": F(1, 3),
        "proper": False,
        "portal": True,
        "periodic_vertex": F(2, 3),
        "vertex_period": 2,
    }
    (row,) = classify_sets(conic)
    assert row["size"] == 3 and row["vertex_period"] == 1


def test_proper_chord_portrait_has_no_portal(cheb):
    (row,) = classify_sets(cheb)
    assert row["proper"] and not row["portal"]
    # periodic data only appears on portal rows
    assert "periodic_vertex" not in row


# ---------------------------------------------------------------------------
# structural invariants


def test_portrait_has_degree_many_faces(basilica, conic, two_portal_cubic):
    for p in (basilica, conic, two_portal_cubic):
        assert len(p.faces) == p.degree


@settings(max_examples=120)
@given(collections(3))
def test_build_plus_agrees_with_fullness_oracle(chords):
    try:
        build_plus(chords, 3)
        accepted = True
    except LaminationError:
        accepted = False
    assert accepted == fullness_oracle(chords, 3)


@settings(max_examples=80)
@given(collections(4))
def test_valid_portraits_satisfy_structure(chords):
    try:
        p = build_plus(chords, 4)
    except LaminationError:
        return
    d = p.degree
    assert len(p.faces) == d
    # every set collapses to a single angle under the map
    for s in p.sets:
        imgs = {sigma(v, d) for v in s.polygon.vertices}
        assert imgs == {s.image}
        periodic = [v for v in s.polygon.vertices if is_periodic(v, d)]
        assert len(periodic) <= 1
        if periodic:
            assert s.periodic_vertex == periodic[0]
        else:
            assert s.periodic_vertex is None
    # set polygons stay pairwise unlinked
    for i in range(len(p.sets)):
        for j in range(i + 1, len(p.sets)):
            for e1 in p.sets[i].polygon.edges():
                for e2 in p.sets[j].polygon.edges():
                    assert not crosses(e1, e2)
    # at least one chord subtends an arc of exactly 1/d
    assert any(
        min(arc_length(c.a, c.b), arc_length(c.b, c.a)) == F(1, d)
        for c in p.chords
    )


def test_chord_input_order_does_not_matter(two_portal_cubic):
    flipped = build_plus(list(reversed(two_portal_cubic.chords)), 3)
    assert flipped.chords == two_portal_cubic.chords
    assert [s.polygon for s in flipped.sets] == [
        s.polygon for s in two_portal_cubic.sets
    ]
