"""Exception types shared across the package.

Every error raised by fracstab derives from FracstabError, so callers can
catch the whole family with one clause while tests pin the exact subtype.
"""


class FracstabError(Exception):
    """Base class for all fracstab errors."""


class CommensurateOrders(FracstabError):
    """Raised when a formula valid only for q1 != q2 is asked about equal orders."""


class BracketFailure(FracstabError):
    """The monotone bracket expansion hit the overflow guard without a sign change."""


class DeltaNotPositive(FracstabError):
    """An operation defined only for det(A) > 0 received delta <= 0."""


class DeltaZeroUnclassified(FracstabError):
    """delta == 0 and no order-independent rule applies; the theory is silent here."""


class DomainError(FracstabError):
    """Arguments fall outside the stated domain box of an inequality check."""


class ContourThroughRoot(FracstabError):
    """|Delta| dropped below tolerance on the counting contour (on- or near-curve input)."""


class RefinementLimit(FracstabError):
    """Adaptive contour refinement exceeded the maximum subdivision depth."""


class NotRational(FracstabError):
    """Orders are not exact rationals with the requested denominators."""


class DimensionCap(FracstabError):
    """The companion system would exceed the supported dimension."""


class StepCap(FracstabError):
    """The requested time grid exceeds the quadratic-memory step cap."""


class NotDecaying(FracstabError):
    """Decay estimation was asked for a trajectory whose norm did not shrink."""
