"""Exception types shared across the package."""


class LaminationError(Exception):
    """Base class for all structural errors raised by this package."""


class NotCritical(LaminationError):
    """A chord in a collection does not collapse under the degree-d map."""

    def __init__(self, index, chord):
        self.index = index
        self.chord = chord
        super().__init__(f"chord #{index} {chord} is not critical")


class Linked(LaminationError):
    """Two chords in a collection cross inside the disk."""

    def __init__(self, i, j, ci, cj):
        self.indices = (i, j)
        super().__init__(f"chords #{i} {ci} and #{j} {cj} cross")


class Duplicate(LaminationError):
    """The same chord appears twice in a collection."""

    def __init__(self, i, j, chord):
        self.indices = (i, j)
        super().__init__(f"chords #{i} and #{j} are both {chord}")


class NotFull(LaminationError):
    """The collection does not force degree-d behaviour on every face."""


class ImageNotCovered(LaminationError):
    """A pullback target misses the image arc of a component."""


class HullEdgeNotInPile(LaminationError):
    """A pile whose hull has an edge that is not one of its chords."""


class ImproperDetected(LaminationError):
    """A concatenation class produced an improper hull edge."""


class OrbitEscapesHorizon(LaminationError):
    """A gap orbit left the region where faces are resolved."""


class NotHyperbolic(LaminationError):
    """Canonical model requested for a gap cycle of degree 1."""


class PrimeCycle(LaminationError):
    """Tuning requested on a cycle that is already prime."""


class Inconclusive(LaminationError):
    """No tuning candidate could be validated at this depth."""


class DepthExhausted(LaminationError):
    """The construction needs more depth/resolution than was given."""
