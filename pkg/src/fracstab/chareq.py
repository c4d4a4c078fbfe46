"""System description and the characteristic function Delta on the principal branch.

The two-dimensional system

    cD^{q1} x = a11*x + a12*y
    cD^{q2} y = a21*x + a22*y,     0 < q1, q2 <= 1  (Caputo derivatives)

has the characteristic function

    Delta(s) = s^(q1+q2) - a11*s^q2 - a22*s^q1 + delta,   delta = det(A),

with every complex power taken on the principal branch Arg s in (-pi, pi].
Roots of Delta with Re s >= 0 decide asymptotic stability; everything else
in the package is built on top of this function.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "SystemSpec",
    "CharParams",
    "principal_power",
    "delta_eval",
    "conjugate_symmetry_check",
]


def _check_order(name: str, q: float) -> None:
    if not (isinstance(q, (int, float)) and math.isfinite(q) and 0.0 < q <= 1.0):
        raise ValueError(f"{name} must lie in (0, 1], got {q!r}")


def _check_finite(name: str, x: float) -> None:
    if not (isinstance(x, (int, float)) and math.isfinite(x)):
        raise ValueError(f"{name} must be a finite real, got {x!r}")


@dataclass(frozen=True)
class SystemSpec:
    """A 2x2 real matrix A = [[a11, a12], [a21, a22]] with orders q1, q2 in (0, 1]."""

    a11: float
    a12: float
    a21: float
    a22: float
    q1: float
    q2: float

    def __post_init__(self) -> None:
        for name in ("a11", "a12", "a21", "a22"):
            _check_finite(name, getattr(self, name))
        _check_order("q1", self.q1)
        _check_order("q2", self.q2)

    def delta(self) -> float:
        """det(A), written exactly as a11*a22 - a12*a21."""
        return self.a11 * self.a22 - self.a12 * self.a21

    def char_params(self) -> "CharParams":
        return CharParams(self.a11, self.a22, self.delta(), self.q1, self.q2)


@dataclass(frozen=True)
class CharParams:
    """The five parameters Delta actually depends on.

    Constructed from a SystemSpec or directly; delta of either sign is legal
    here (the classifier decides what each sign means). The direct route also
    covers scalar three-term equations sharing the same Delta.
    """

    a11: float
    a22: float
    delta: float
    q1: float
    q2: float

    def __post_init__(self) -> None:
        for name in ("a11", "a22", "delta"):
            _check_finite(name, getattr(self, name))
        _check_order("q1", self.q1)
        _check_order("q2", self.q2)


def principal_power(s: complex, q: float) -> complex:
    """s**q on the principal branch, exp(q*(ln|s| + i*Arg s)), Arg s in (-pi, pi].

    A negative real s with a -0.0 imaginary component would otherwise fall on
    the Arg = -pi side; the imaginary part is normalized so the branch cut
    itself always evaluates with Arg = pi. principal_power(0, q) = 0 for q > 0.
    """
    s = complex(s)
    if s == 0:
        return 0j
    if s.imag == 0.0:
        # collapse -0.0 so Arg(negative real) is +pi, not -pi
        s = complex(s.real, 0.0)
    return cmath.exp(q * cmath.log(s))


def delta_eval(p: CharParams, s: complex) -> complex:
    """Delta(s) = s^(q1+q2) - a11*s^q2 - a22*s^q1 + delta on the principal branch.

    delta_eval(p, 0) returns delta by convention (the limit value), which makes
    the sign test Delta(0) = delta directly executable.
    """
    s = complex(s)
    if s == 0:
        return complex(p.delta)
    return (
        principal_power(s, p.q1 + p.q2)
        - p.a11 * principal_power(s, p.q2)
        - p.a22 * principal_power(s, p.q1)
        + p.delta
    )


def conjugate_symmetry_check(p: CharParams, s: complex, rel_tol: float = 1e-12) -> bool:
    """True iff Delta(conj(s)) equals conj(Delta(s)) to relative tolerance.

    Real coefficients and the principal branch commute with conjugation away
    from the branch cut, so this holds for every s with Im s != 0; roots off
    the real axis therefore come in conjugate pairs.
    """
    if complex(s).imag == 0:
        raise ValueError("conjugate_symmetry_check requires Im s != 0")
    d = delta_eval(p, s)
    d_conj = delta_eval(p, complex(s).conjugate())
    return abs(d_conj - d.conjugate()) <= rel_tol * (1.0 + abs(d))
