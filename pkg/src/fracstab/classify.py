"""Exact stability decision procedures in the (a11, a22) plane.

Two order-independent regions settle a system regardless of (q1, q2):

    R_u(delta) = { a11 + a22 >= delta + 1 }  or  { a11 > 0, a22 > 0, a11*a22 >= delta }
    R_s(delta) = { a11 + a22 < 0  and  max(a11, a22) < min(1, delta) }

(unstable and stable respectively, for delta > 0; delta < 0 is unstable
outright). Everything in between is order-dependent and decided by the sign
of the margin a22 - phi(a11) relative to the critical curve: below the curve
the system is asymptotically stable with algebraic decay exponent
min(q1, q2), above it unstable, and points on the curve carry pure imaginary
roots and are reported as marginal, never silently resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .chareq import SystemSpec
from .curve import CurveParams, phi
from .errors import DeltaNotPositive, DeltaZeroUnclassified, DomainError

__all__ = [
    "VerdictKind",
    "Reason",
    "Verdict",
    "RegionMembership",
    "region_membership",
    "classify_order_independent",
    "classify",
    "qscan",
    "qscan_verdicts",
    "a2_inequality_check",
]


class VerdictKind(str, Enum):
    UnstableAllOrders = "UnstableAllOrders"
    StableAllOrders = "StableAllOrders"
    StableForOrders = "StableForOrders"
    UnstableForOrders = "UnstableForOrders"
    MarginalOnCurve = "MarginalOnCurve"


class Reason(str, Enum):
    NegativeDelta = "NegativeDelta"
    SumExceedsDeltaPlusOne = "SumExceedsDeltaPlusOne"
    PositiveProductExceedsDelta = "PositiveProductExceedsDelta"
    RsMembership = "RsMembership"
    BelowGamma = "BelowGamma"
    AboveGamma = "AboveGamma"
    OnGamma = "OnGamma"


_STABLE_KINDS = frozenset({VerdictKind.StableAllOrders, VerdictKind.StableForOrders})
_UNSTABLE_KINDS = frozenset({VerdictKind.UnstableAllOrders, VerdictKind.UnstableForOrders})


@dataclass(frozen=True)
class Verdict:
    """Classification outcome together with the rule that produced it.

    margin is the signed distance a22 - phi(a11) when the order-dependent test
    ran, else 0. decay_exponent = min(q1, q2) is attached to stable verdicts
    produced with known orders; phi_value is set whenever phi was computed.
    """

    kind: VerdictKind
    reason: Reason
    margin: float = 0.0
    decay_exponent: float | None = None
    phi_value: float | None = None

    @property
    def is_stable(self) -> bool:
        return self.kind in _STABLE_KINDS

    @property
    def is_unstable(self) -> bool:
        return self.kind in _UNSTABLE_KINDS


@dataclass(frozen=True)
class RegionMembership:
    in_ru: bool
    in_rs: bool


def tie_tolerance(a22: float) -> float:
    """Width of the marginal band around the curve: 1e-10 * (1 + |a22|)."""
    return 1e-10 * (1.0 + abs(a22))


def region_membership(a11: float, a22: float, delta: float) -> RegionMembership:
    """Literal membership in R_u(delta) and R_s(delta); defined for delta > 0 only.

    The inequalities are copied with their exact strictness: R_u uses >= on
    both branches, R_s uses strict <. The two regions are disjoint.
    """
    if not delta > 0.0:
        raise DeltaNotPositive(f"R_u/R_s are defined for delta > 0, got {delta!r}")
    in_ru = (a11 + a22 >= delta + 1.0) or (
        a11 > 0.0 and a22 > 0.0 and a11 * a22 >= delta
    )
    in_rs = (a11 + a22 < 0.0) and (max(a11, a22) < min(1.0, delta))
    return RegionMembership(in_ru=in_ru, in_rs=in_rs)


def classify_order_independent(
    a11: float, a22: float, delta: float
) -> Verdict | None:
    """The order-independent rules alone; None when they are silent.

    delta < 0 is unstable for every order pair; for delta > 0, membership in
    R_u or R_s settles the system. delta = 0 is never settled here.
    """
    if delta < 0.0:
        return Verdict(VerdictKind.UnstableAllOrders, Reason.NegativeDelta)
    if delta == 0.0:
        return None
    mem = region_membership(a11, a22, delta)
    if mem.in_ru:
        if a11 + a22 >= delta + 1.0:
            return Verdict(VerdictKind.UnstableAllOrders, Reason.SumExceedsDeltaPlusOne)
        return Verdict(VerdictKind.UnstableAllOrders, Reason.PositiveProductExceedsDelta)
    if mem.in_rs:
        return Verdict(VerdictKind.StableAllOrders, Reason.RsMembership)
    return None


def _classify_params(
    a11: float, a22: float, delta: float, q1: float, q2: float
) -> Verdict:
    oi = classify_order_independent(a11, a22, delta)
    if oi is not None:
        if oi.kind is VerdictKind.StableAllOrders:
            return Verdict(oi.kind, oi.reason, decay_exponent=min(q1, q2))
        return oi
    if delta == 0.0:
        raise DeltaZeroUnclassified(
            "delta = 0 and no order-independent rule applies; "
            "the region tests assume det(A) != 0"
        )
    phi_val = phi(CurveParams(delta, q1, q2), a11)
    margin = a22 - phi_val
    tol = tie_tolerance(a22)
    if margin < -tol:
        return Verdict(
            VerdictKind.StableForOrders,
            Reason.BelowGamma,
            margin=margin,
            decay_exponent=min(q1, q2),
            phi_value=phi_val,
        )
    if margin > tol:
        return Verdict(
            VerdictKind.UnstableForOrders,
            Reason.AboveGamma,
            margin=margin,
            phi_value=phi_val,
        )
    return Verdict(
        VerdictKind.MarginalOnCurve, Reason.OnGamma, margin=margin, phi_value=phi_val
    )


def classify(s: SystemSpec) -> Verdict:
    """Full decision for a system: order-independent rules first, then the
    phi margin test. Raises DeltaZeroUnclassified when det(A) = 0 falls
    through the order-independent rules."""
    return _classify_params(s.a11, s.a22, s.delta(), s.q1, s.q2)


def qscan(a11: float, a22: float, delta: float, grid_n: int) -> np.ndarray:
    """Boolean stability raster over (q1, q2) in (0, 1]^2.

    Cell [j-1, k-1] is True iff the system is classified stable at
    q1 = j/grid_n, q2 = k/grid_n (j, k = 1..grid_n). Marginal cells are False
    here; use qscan_verdicts to keep them distinguishable.
    """
    return np.asarray(qscan_verdicts(a11, a22, delta, grid_n) == 1)


def qscan_verdicts(a11: float, a22: float, delta: float, grid_n: int) -> np.ndarray:
    """Ternary raster over (q1, q2): 0 unstable, 1 stable, 2 marginal."""
    if not delta > 0.0:
        raise DeltaNotPositive(f"qscan requires delta > 0, got {delta!r}")
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n!r}")
    out = np.zeros((grid_n, grid_n), dtype=np.int8)
    for j in range(1, grid_n + 1):
        for k in range(1, grid_n + 1):
            v = _classify_params(a11, a22, delta, j / grid_n, k / grid_n)
            if v.is_stable:
                out[j - 1, k - 1] = 1
            elif v.kind is VerdictKind.MarginalOnCurve:
                out[j - 1, k - 1] = 2
    return out


def a2_inequality_check(x: float, y: float, alpha: float) -> bool:
    """Check alpha^y*cos(y) + alpha^(y-x)*cos(y-x) + alpha^(-x)*cos(x) >= 1.

    Stated for x, y in [0, pi/2] and alpha > 0; the comparison allows
    numerical slack of 1e-12 on the >= side. This inequality is what forces
    the curve family to stay clear of the third quadrant.
    """
    half_pi = math.pi / 2.0
    if not (0.0 <= x <= half_pi and 0.0 <= y <= half_pi):
        raise DomainError(f"(x, y) must lie in [0, pi/2]^2, got ({x}, {y})")
    if not (math.isfinite(alpha) and alpha > 0.0):
        raise DomainError(f"alpha must be finite and > 0, got {alpha!r}")
    value = (
        alpha**y * math.cos(y)
        + alpha ** (y - x) * math.cos(y - x)
        + alpha ** (-x) * math.cos(x)
    )
    return value >= 1.0 - 1e-12
