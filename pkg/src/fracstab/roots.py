"""Independent root-count verification for the characteristic function.

Three cross-checking instruments, none of which uses the curve machinery:

* explicit modulus bounds l <= |s| <= L valid for every root with Re s >= 0,
  which make the right half-plane effectively compact;
* an argument-principle winding count of Delta over the boundary of the
  bounded half-annulus, with adaptive phase tracking;
* for rational orders, reduction to a single-order companion system checked
  against the eigenvalue sector criterion (|Arg lambda| > pi/(2n)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .chareq import CharParams, SystemSpec, delta_eval, principal_power
from .errors import (
    ContourThroughRoot,
    DeltaNotPositive,
    DimensionCap,
    NotRational,
    RefinementLimit,
)

__all__ = [
    "RootBounds",
    "RootCountReport",
    "CompanionSystem",
    "unstable_root_bounds",
    "count_unstable_roots",
    "has_positive_real_root",
    "positive_real_roots",
    "polish_unstable_roots",
    "commensurate_reduce",
    "matignon_stable",
]

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RootBounds:
    """Moduli bounds for unstable roots plus the constants they came from.

    p is the norm exponent (q1+q2)/(2*min(q1,q2)) >= 1; gamma_const and
    d_const are the gamma and D of the incommensurate derivation and are NaN
    in the commensurate fallback, where the quadratic in z = s^q is bounded
    directly instead.
    """

    l: float
    L: float
    p: float
    gamma_const: float
    d_const: float

    def __post_init__(self) -> None:
        if not (0.0 < self.l <= self.L):
            raise ValueError(f"bounds must satisfy 0 < l <= L, got ({self.l}, {self.L})")


@dataclass(frozen=True)
class RootCountReport:
    """Winding evidence for the count of roots with Re s >= 0."""

    n_unstable: int
    bounds: RootBounds
    contour_samples: int
    winding_turns: float
    refinement_depth: int


def unstable_root_bounds(p: CharParams) -> RootBounds:
    """Compute l, L with l <= |s| <= L for every root of Delta with Re s >= 0.

    Incommensurate orders: with m = min(q1, q2), alpha = (q1+q2)/2,

        p_exp = (q1+q2)/(2m),  q_conj = (q1+q2)/|q1-q2|,
        gamma = (q_conj+1)/(q_conj-1),
        D = max(delta^(-q1/(2m)), delta^(-q2/(2m))),
        u = D * (|a11|^p_exp + |a22|^p_exp),
        l = (sqrt(delta)*f(u))^(1/alpha),  L = (sqrt(delta)*F(u))^(1/alpha),

    with f(u) = (-u + sqrt(u^2+4*gamma))/(2*gamma) and F(u) = u + sqrt(gamma).
    f is evaluated as 2/(u + sqrt(u^2+4*gamma)) to avoid cancellation, and as
    1/u once u is large enough that the gamma correction is below double
    precision.

    Commensurate q1 == q2 == q: gamma degenerates, so the quadratic
    z^2 - (a11+a22)z + delta in z = s^q is bounded directly:
    |z| <= ||a||_1 + sqrt(delta) + 1 and |z| >= delta / (||a||_1 + sqrt(delta) + 1),
    then mapped through |s| = |z|^(1/q).
    """
    if not p.delta > 0.0:
        raise DeltaNotPositive(f"root bounds require delta > 0, got {p.delta!r}")
    if p.q1 == p.q2:
        q = p.q1
        big = abs(p.a11) + abs(p.a22) + math.sqrt(p.delta) + 1.0
        small = p.delta / big
        return RootBounds(
            l=small ** (1.0 / q),
            L=big ** (1.0 / q),
            p=1.0,
            gamma_const=math.nan,
            d_const=math.nan,
        )
    m = min(p.q1, p.q2)
    alpha = 0.5 * (p.q1 + p.q2)
    p_exp = alpha / m
    q_conj = (p.q1 + p.q2) / abs(p.q1 - p.q2)
    gamma = (q_conj + 1.0) / (q_conj - 1.0)
    d_const = max(p.delta ** (-p.q1 / (2.0 * m)), p.delta ** (-p.q2 / (2.0 * m)))
    u = d_const * (abs(p.a11) ** p_exp + abs(p.a22) ** p_exp)
    # log-space throughout: u can overflow any polynomial expression long
    # before the final bounds leave the representable range
    if u > 1e8:
        log_f = -math.log(u)
    else:
        log_f = math.log(2.0 / (u + math.sqrt(u * u + 4.0 * gamma)))
    log_sqrt_delta = 0.5 * math.log(p.delta)
    l = math.exp((log_sqrt_delta + log_f) / alpha)
    L = math.exp((log_sqrt_delta + math.log(u + math.sqrt(gamma))) / alpha)
    # keep the contour radii representable even in pathological corners
    l = max(l, 1e-300)
    return RootBounds(l=l, L=min(L, 1e300), p=p_exp, gamma_const=gamma, d_const=d_const)


def _wrap_pi(d: float) -> float:
    return (d + math.pi) % _TWO_PI - math.pi


def count_unstable_roots(p: CharParams, max_depth: int = 24) -> RootCountReport:
    """Count roots with Re s >= 0 (with multiplicity) by the argument principle.

    The contour is the positively oriented boundary of
    {Re s >= 0, l*(1-1e-3) <= |s| <= L*(1+1e-3)}: outer arc, imaginary axis
    down, inner arc, imaginary axis up. The axis segments are parametrized
    geometrically in |s| because the annulus can span many decades. Each
    segment is sampled adaptively until consecutive phase steps of Delta stay
    below pi/2; the accumulated phase must close to an integer number of
    turns.

    Callers are expected to keep inputs off the critical curve: a curve (or
    near-curve) system puts a root on the imaginary axis and trips
    ContourThroughRoot.
    """
    if not p.delta > 0.0:
        raise DeltaNotPositive(f"contour counting requires delta > 0, got {p.delta!r}")
    b = unstable_root_bounds(p)
    r_in = b.l * (1.0 - 1e-3)
    r_out = b.L * (1.0 + 1e-3)
    thresh = 1e-12 * (1.0 + p.delta)
    log_ratio = math.log(r_out / r_in)
    half_pi = 0.5 * math.pi

    def outer_arc(t: float) -> complex:
        theta = -half_pi + math.pi * t
        return cmath.rect(r_out, theta)

    def axis_down(t: float) -> complex:
        return complex(0.0, r_out * math.exp(-log_ratio * t))

    def inner_arc(t: float) -> complex:
        theta = half_pi - math.pi * t
        return cmath.rect(r_in, theta)

    def axis_up(t: float) -> complex:
        return complex(0.0, -r_in * math.exp(log_ratio * t))

    evals = 0
    deepest = 0

    def phase_at(seg, t: float) -> float:
        nonlocal evals
        evals += 1
        val = delta_eval(p, seg(t))
        if abs(val) < thresh:
            raise ContourThroughRoot(
                f"|Delta| = {abs(val):.3e} < {thresh:.3e} at contour point {seg(t)}"
            )
        return cmath.phase(val)

    def segment_turns(seg) -> float:
        nonlocal deepest
        n0 = 32
        ts = [i / n0 for i in range(n0 + 1)]
        phs = [phase_at(seg, t) for t in ts]
        total = 0.0
        stack = [
            (ts[i], phs[i], ts[i + 1], phs[i + 1], 0) for i in range(n0)
        ]
        while stack:
            t0, ph0, t1, ph1, depth = stack.pop()
            d = _wrap_pi(ph1 - ph0)
            if abs(d) < half_pi:
                total += d
                continue
            if depth + 1 > max_depth:
                raise RefinementLimit(
                    f"phase step {d:.3f} rad still >= pi/2 at depth {max_depth}"
                )
            deepest = max(deepest, depth + 1)
            tm = 0.5 * (t0 + t1)
            phm = phase_at(seg, tm)
            stack.append((t0, ph0, tm, phm, depth + 1))
            stack.append((tm, phm, t1, ph1, depth + 1))
        return total

    total = 0.0
    for seg in (outer_arc, axis_down, inner_arc, axis_up):
        total += segment_turns(seg)
    turns = total / _TWO_PI
    n = round(turns)
    if abs(turns - n) > 1e-6 or n < 0:
        raise RefinementLimit(
            f"winding {turns!r} did not settle to a nonnegative integer"
        )
    return RootCountReport(
        n_unstable=n,
        bounds=b,
        contour_samples=evals,
        winding_turns=turns,
        refinement_depth=deepest,
    )


def _real_delta(p: CharParams, t: float) -> float:
    # Delta restricted to the positive real axis is real-valued
    if t == 0.0:
        return p.delta
    return (
        t ** (p.q1 + p.q2) - p.a11 * t**p.q2 - p.a22 * t**p.q1 + p.delta
    )


def positive_real_roots(p: CharParams, n_grid: int = 200) -> list[float]:
    """Locate the positive real roots of Delta by sign scan plus bisection.

    Candidate abscissae: 1, a11^(1/q1) and a22^(1/q2) when defined (where the
    two middle terms individually dominate), a logarithmic grid over the
    unstable-root modulus range when delta > 0 (a wide default range
    otherwise), and the limit value Delta(0+) = delta as the left sentinel.
    Each bracketing interval is bisected to 1e-12 relative width.
    """
    samples = {1.0}
    if p.a11 > 0.0:
        samples.add(p.a11 ** (1.0 / p.q1))
    if p.a22 > 0.0:
        samples.add(p.a22 ** (1.0 / p.q2))
    if p.delta > 0.0:
        b = unstable_root_bounds(p)
        lo, hi = b.l / 2.0, 2.0 * b.L
    else:
        lo, hi = 1e-8, 1e8
    log_lo, log_hi = math.log(lo), math.log(hi)
    for i in range(n_grid + 1):
        samples.add(math.exp(log_lo + (log_hi - log_lo) * i / n_grid))
    ts = sorted(samples)
    # left sentinel at t = 0 carries the limit value delta
    ts = [0.0] + ts
    vals = [_real_delta(p, t) for t in ts]

    roots: list[float] = []
    for i in range(len(ts) - 1):
        f0, f1 = vals[i], vals[i + 1]
        if f0 == 0.0:
            if ts[i] > 0.0:
                roots.append(ts[i])
            continue
        if f0 * f1 >= 0.0:
            continue
        a, fa, c = ts[i], f0, ts[i + 1]
        while c - a > 1e-12 * c:
            mid = 0.5 * (a + c)
            if mid <= a or mid >= c:
                break
            fm = _real_delta(p, mid)
            if fm == 0.0:
                a = c = mid
                break
            if fa * fm < 0.0:
                c = mid
            else:
                a, fa = mid, fm
        roots.append(0.5 * (a + c))
    if vals[-1] == 0.0:
        roots.append(ts[-1])
    return roots


def has_positive_real_root(p: CharParams) -> bool:
    """True iff t -> Delta(t) changes sign somewhere on t > 0.

    Works for any delta; a negative delta already forces a root between
    Delta(0+) = delta < 0 and Delta(+inf) = +inf.
    """
    return len(positive_real_roots(p)) > 0


def _delta_prime(p: CharParams, s: complex) -> complex:
    return (
        (p.q1 + p.q2) * principal_power(s, p.q1 + p.q2 - 1.0)
        - p.a11 * p.q2 * principal_power(s, p.q2 - 1.0)
        - p.a22 * p.q1 * principal_power(s, p.q1 - 1.0)
    )


def _residual_scale(p: CharParams, s: complex) -> float:
    r = abs(s)
    return (
        1.0
        + abs(p.delta)
        + r ** (p.q1 + p.q2)
        + abs(p.a11) * r**p.q2
        + abs(p.a22) * r**p.q1
    )


def polish_unstable_roots(
    p: CharParams, expected: int | None = None
) -> list[complex]:
    """Locate the individual roots behind a winding count.

    Positive real roots come from the bisection scan; complex ones from
    damped Newton iterations seeded on a log-radius grid across the sector
    (upper half only, conjugates mirrored afterwards). Roots are accepted
    when the residual is small relative to the term magnitudes of Delta, then
    deduplicated. The caller should compare len(result) with the winding
    count; a mismatch means the polish missed a root (or hit a multiple one)
    and the result cannot be trusted as a complete list.
    """
    if expected is None:
        expected = count_unstable_roots(p).n_unstable
    if expected == 0:
        return []
    b = unstable_root_bounds(p)

    found: list[complex] = [complex(r, 0.0) for r in positive_real_roots(p)]

    def try_newton(s: complex) -> None:
        for _ in range(80):
            if not (0.01 * b.l < abs(s) < 100.0 * b.L) or s.real < -0.6 * abs(s):
                return
            f = delta_eval(p, s)
            if abs(f) <= 1e-11 * _residual_scale(p, s):
                break
            df = _delta_prime(p, s)
            if df == 0:
                return
            step = f / df
            # damp wild steps so iterates stay near the annulus
            if abs(step) > 0.5 * abs(s):
                step *= 0.5 * abs(s) / abs(step)
            s = s - step
        else:
            return
        if abs(delta_eval(p, s)) > 1e-9 * _residual_scale(p, s):
            return
        if s.real < -1e-12 * abs(s):
            return
        if abs(s.imag) <= 1e-9 * max(1.0, abs(s)):
            s = complex(s.real, 0.0)
        elif s.imag < 0.0:
            s = s.conjugate()
        for r in found:
            if abs(s - r) <= 1e-6 * (abs(s) + abs(r)):
                return
        found.append(s)

    def run_seed_pass(n_radii: int, fracs: tuple[float, ...]) -> None:
        log_l, log_big = math.log(b.l), math.log(b.L)
        for i in range(n_radii):
            radius = math.exp(log_l + (log_big - log_l) * (i + 0.5) / n_radii)
            for frac in fracs:
                try_newton(cmath.rect(radius, frac * 0.5 * math.pi))

    decades = max(1.0, math.log10(b.L / b.l))
    n_radii = int(min(96, max(16, 6 * decades)))
    run_seed_pass(n_radii, (0.1, 0.3, 0.5, 0.7, 0.9, 0.99))

    def total_count() -> int:
        return sum(1 if r.imag == 0.0 else 2 for r in found)

    if total_count() != expected:
        run_seed_pass(2 * n_radii, (0.02, 0.2, 0.4, 0.6, 0.8, 0.95, 0.999))

    full = []
    for r in found:
        full.append(r)
        if r.imag != 0.0:
            full.append(r.conjugate())
    return sorted(full, key=lambda s: (s.real, s.imag))


@dataclass(frozen=True, eq=False)
class CompanionSystem:
    """Single-order companion form of a rational-order system.

    matrix is the (k1+k2) x (k1+k2) real matrix B whose order-(1/denom)
    linear system is equivalent to the original; the state chain is
    (x, D^(1/n)x, ..., D^((k1-1)/n)x, y, D^(1/n)y, ..., D^((k2-1)/n)y).
    """

    matrix: np.ndarray
    denom: int

    @property
    def base_order(self) -> float:
        return 1.0 / self.denom


def commensurate_reduce(
    s: SystemSpec, denominators: tuple[int, int]
) -> CompanionSystem:
    """Reduce q1 = k1/n, q2 = k2/n to one system of k1+k2 equations of order 1/n.

    denominators are the claimed denominators of q1 and q2; their lcm n must
    not exceed 64 and the orders must match k/n to within 1e-12, else
    NotRational. DimensionCap guards k1 + k2 > 128. The chain rows shift by
    one 1/n-derivative each; the rows for D^(q1)x and D^(q2)y couple back to
    the x and y slots.
    """
    n1, n2 = denominators
    if not (isinstance(n1, int) and isinstance(n2, int) and n1 >= 1 and n2 >= 1):
        raise NotRational(f"denominators must be positive integers, got {denominators!r}")
    n = math.lcm(n1, n2)
    if n > 64:
        raise NotRational(f"common denominator {n} exceeds the supported 64")
    k1 = round(s.q1 * n)
    k2 = round(s.q2 * n)
    if k1 < 1 or abs(s.q1 - k1 / n) > 1e-12:
        raise NotRational(f"q1 = {s.q1!r} is not k/{n} within 1e-12")
    if k2 < 1 or abs(s.q2 - k2 / n) > 1e-12:
        raise NotRational(f"q2 = {s.q2!r} is not k/{n} within 1e-12")
    size = k1 + k2
    if size > 128:
        raise DimensionCap(f"companion dimension {size} exceeds 128")
    b = np.zeros((size, size))
    for i in range(k1 - 1):
        b[i, i + 1] = 1.0
    b[k1 - 1, 0] = s.a11
    b[k1 - 1, k1] = s.a12
    for j in range(k2 - 1):
        b[k1 + j, k1 + j + 1] = 1.0
    b[size - 1, 0] = s.a21
    b[size - 1, k1] = s.a22
    return CompanionSystem(matrix=b, denom=n)


def matignon_stable(cs: CompanionSystem) -> bool:
    """Sector criterion for the companion system: every eigenvalue lambda of B
    must satisfy |Arg lambda| > pi/(2n) for asymptotic stability."""
    eigs = np.linalg.eigvals(cs.matrix)
    return bool(np.all(np.abs(np.angle(eigs)) > math.pi / (2.0 * cs.denom)))
