"""Shared portrait fixtures.

Each fixture rebuilds its portrait from raw chords so a test failure in
validation shows up here rather than in an unrelated module.
"""

from fractions import Fraction

import pytest

from rootlam.circle import Chord
from rootlam.portrait import CriticalPortrait, build_plus


def F(num, den=1):
    return Fraction(num, den)


@pytest.fixture
def cheb() -> CriticalPortrait:
    # degree 2, proper critical chord, both endpoints preperiodic
    return build_plus([Chord(F(1, 4), F(3, 4))], 2)


@pytest.fixture
def basilica() -> CriticalPortrait:
    # degree 2, portal chord: 2/3 is periodic of period 2
    return build_plus([Chord(F(1, 6), F(2, 3))], 2)


@pytest.fixture
def conic() -> CriticalPortrait:
    # degree 3, both chords share the fixed endpoint 0
    return build_plus([Chord(F(0), F(1, 3)), Chord(F(0), F(2, 3))], 3)


@pytest.fixture
def two_portal_cubic() -> CriticalPortrait:
    # degree 3, two disjoint portal chords with fixed vertices 0 and 1/2
    return build_plus([Chord(F(0), F(1, 3)), Chord(F(1, 2), F(5, 6))], 3)
