"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`SphereSpanError`, so callers (and the CLI) can separate
operational failures from programming bugs.
"""


class SphereSpanError(Exception):
    pass


# body
class NonFiniteInput(SphereSpanError, ValueError):
    pass


class OracleInconsistent(SphereSpanError):
    """Membership oracle is not monotone along a ray from the origin."""


class ZeroVector(SphereSpanError, ValueError):
    pass


class NonExposedDirection(SphereSpanError):
    """The functional is minimised on a nondegenerate face."""


class TooFewVertices(SphereSpanError, ValueError):
    pass


class DimensionMismatch(SphereSpanError, ValueError):
    pass


class InvalidBody(SphereSpanError, ValueError):
    pass


# section
class DegenerateSection(SphereSpanError):
    pass


class MidpointOutside(SphereSpanError):
    pass


class MidpointZero(SphereSpanError):
    pass


class ZeroMidpoint(MidpointZero):
    pass


class ContinuumSuspected(SphereSpanError):
    """Too many distinct chords survived merging: a flat face is likely.

    The merged chords are attached as ``chords``.
    """

    def __init__(self, message, chords=None):
        super().__init__(message)
        self.chords = chords or []


class NotStrictlyConvex(SphereSpanError):
    pass


class NoStripChord(SphereSpanError):
    pass


class MultipleStripChords(SphereSpanError):
    pass


# decompose
class EpsSearchFailed(SphereSpanError):
    pass


class ParamSearchFailed(SphereSpanError):
    pass


class VanishingValue(SphereSpanError):
    pass


class SearchFailed(SphereSpanError):
    def __init__(self, message, obstructing=None):
        super().__init__(message)
        self.obstructing = obstructing


# degree
class SamplingTooCoarse(SphereSpanError):
    pass


class ZeroImage(SphereSpanError):
    pass


class NonRegularValue(SphereSpanError):
    pass


class BadTriangulation(SphereSpanError):
    pass


class VerticesNotFixed(SphereSpanError):
    pass


# obstruct
class NoChordsFound(SphereSpanError):
    pass


class SectionUndefinedEverywhere(SphereSpanError):
    pass


class InvalidSection(SphereSpanError):
    pass


class NotOnSphere(SphereSpanError):
    pass


class MalformedInput(SphereSpanError, ValueError):
    pass


class NotOnBoundary(SphereSpanError):
    pass


class NoSupportFunctional(SphereSpanError):
    pass
