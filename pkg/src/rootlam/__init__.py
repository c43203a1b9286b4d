"""Exact invariant laminations of the angle d-tupling map.

Rational critical portraits in, root laminations out: pullback webs,
pile concatenation, gap classification, tuning with primality
certificates, tile trees, and an atlas of bounded portraits.  All
angle arithmetic is exact over the rationals.
"""

from .circle import (
    Chord,
    GapLeaf,
    OrbitClass,
    classify_orbit,
    crosses,
    format_angle,
    format_chord,
    is_periodic,
    is_proper,
    normalize,
    orbit,
    parse_angle,
    parse_chord,
    sigma,
)
from .errors import (
    DepthExhausted,
    Duplicate,
    ImageNotCovered,
    ImproperDetected,
    Inconclusive,
    LaminationError,
    Linked,
    NotCritical,
    NotFull,
    NotHyperbolic,
    PrimeCycle,
)
from .gaps import (
    Gap,
    GapClass,
    GapCycle,
    boundary_step_degree,
    classify_gap,
    classify_satellite,
    detect_capture,
    extract_gaps,
    find_gap_containing,
    gap_orbits,
    kiwi_guard,
    leaf_side_cycle,
)
from .piles import ClassPartition, LaminationApprox, concat_classes, preroot_qlamination
from .portrait import CriticalPortrait, PortraitSet, build_plus, validate_collection
from .pullback import (
    Web,
    all_pullbacks,
    fib,
    iterate_web,
    pullbacks_into_component,
    sibling_pullbacks,
    verify_sibling_property,
)
from .roots import (
    CanonicalModel,
    PortalCycle,
    RootReport,
    atlas,
    build_root,
    canonical_model,
    check_legal,
    critical_chords,
    enumerate_portraits,
    is_prime,
    portal_cycles,
    quadratic_portrait_chords,
    tune_cycle,
)
from .subdivision import Region, face_containing, subdivide
from .tiles import tiles

__version__ = "0.1.0"
