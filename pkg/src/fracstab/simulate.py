"""Trajectory integration for the two-dimensional multi-order Caputo IVP.

The integrator is the fractional Adams-Bashforth-Moulton predictor-corrector
(PECE, one corrector sweep) applied per component with that component's own
order: product-rectangle weights for the predictor, product-trapezoid weights
for the corrector, and the full O(N^2) memory term. With f = A x,

    predictor  x^P_{n+1} = x0 + h^q/G(q+1) * sum_{j<=n} d_{n-j} f_j,
               d_m = (m+1)^q - m^q,
    corrector  x_{n+1}   = x0 + h^q/G(q+2) * ( f(x^P_{n+1}) + a_{0,n} f_0
                           + sum_{1<=j<=n} c_{n-j} f_j ),
               a_{0,n} = n^(q+1) - (n-q)(n+1)^q,
               c_m = (m+2)^(q+1) + m^(q+1) - 2(m+1)^(q+1).

No short-memory truncation: the decay checks downstream rely on the exact
tail behavior, and desk-scale grids keep the quadratic cost acceptable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chareq import SystemSpec
from .errors import NotDecaying, StepCap

__all__ = ["Trajectory", "DecayEstimate", "integrate", "estimate_decay", "STEP_CAP"]

# quadratic memory-cost cap on the number of grid steps
STEP_CAP = 2e5

# states beyond this magnitude terminate the run with the overflow flag
_OVERFLOW_LIMIT = 1e300

_METHOD_NOTE = (
    "fractional Adams-Bashforth-Moulton PECE, per-component orders, "
    "full memory, one corrector sweep"
)


@dataclass(eq=False)
class Trajectory:
    """Discrete solution: times[k] = k*h, states[k] = (x, y) at times[k].

    overflowed marks early termination because the state left [-1e300, 1e300];
    for unstable systems this is an expected outcome, not a failure.
    """

    times: np.ndarray
    states: np.ndarray
    step: float
    method_order_note: str
    overflowed: bool = False

    def norms(self) -> np.ndarray:
        return np.hypot(self.states[:, 0], self.states[:, 1])


@dataclass(frozen=True)
class DecayEstimate:
    """Least-squares slope of log||state|| against log t over the tail."""

    slope: float
    tail_fraction: float
    r_squared: float


def integrate(
    s: SystemSpec, x0: tuple[float, float], t_end: float, h: float
) -> Trajectory:
    """Integrate the IVP from x(0) = x0 on the uniform grid with step h.

    Deterministic; raises StepCap when t_end/h exceeds 2e5 grid steps. The
    trajectory is truncated with overflowed=True as soon as a state component
    leaves the finite range (growth past 1e300).
    """
    if not (t_end > 0.0 and math.isfinite(t_end)):
        raise ValueError(f"t_end must be finite and > 0, got {t_end!r}")
    if not (h > 0.0 and math.isfinite(h)):
        raise ValueError(f"h must be finite and > 0, got {h!r}")
    if t_end / h > STEP_CAP * (1.0 + 1e-12):
        raise StepCap(
            f"t_end/h = {t_end / h:.3g} exceeds the {STEP_CAP:.0e} step cap"
        )
    x_init = np.asarray(x0, dtype=float)
    if x_init.shape != (2,) or not np.all(np.isfinite(x_init)):
        raise ValueError(f"x0 must be a finite real pair, got {x0!r}")

    n_steps = int(math.ceil(t_end / h - 1e-12))
    a = np.array([[s.a11, s.a12], [s.a21, s.a22]])
    qs = np.array([s.q1, s.q2])

    # per-component quadrature kernels
    m = np.arange(n_steps + 1, dtype=float)
    d_ker = [(m + 1.0) ** q - m**q for q in qs]
    c_ker = [(m + 2.0) ** (q + 1.0) + m ** (q + 1.0) - 2.0 * (m + 1.0) ** (q + 1.0) for q in qs]
    w_pred = np.array([h**q / math.gamma(q + 1.0) for q in qs])
    w_corr = np.array([h**q / math.gamma(q + 2.0) for q in qs])

    x = np.empty((n_steps + 1, 2))
    f = np.empty((n_steps + 1, 2))
    x[0] = x_init
    f[0] = a @ x_init
    overflowed = False
    last = n_steps
    for n in range(n_steps):
        mem_p = np.array(
            [np.dot(d_ker[i][: n + 1][::-1], f[: n + 1, i]) for i in (0, 1)]
        )
        x_pred = x_init + w_pred * mem_p
        f_pred = a @ x_pred
        a0 = np.array(
            [n ** (q + 1.0) - (n - q) * (n + 1.0) ** q for q in qs]
        )
        mem_c = np.array(
            [np.dot(c_ker[i][:n][::-1], f[1 : n + 1, i]) for i in (0, 1)]
        )
        x[n + 1] = x_init + w_corr * (f_pred + a0 * f[0] + mem_c)
        if not np.all(np.isfinite(x[n + 1])) or np.max(np.abs(x[n + 1])) > _OVERFLOW_LIMIT:
            overflowed = True
            last = n
            break
        f[n + 1] = a @ x[n + 1]

    times = h * np.arange(last + 1, dtype=float)
    return Trajectory(
        times=times,
        states=x[: last + 1].copy(),
        step=h,
        method_order_note=_METHOD_NOTE,
        overflowed=overflowed,
    )


def estimate_decay(traj: Trajectory, tail_fraction: float) -> DecayEstimate:
    """Fit log||state|| ~ slope * log t over the final tail_fraction of samples.

    Requires an actually decaying trajectory (final norm below the initial
    one, no overflow) and at least two tail samples above the 1e-300
    underflow guard; otherwise NotDecaying.
    """
    if not (0.0 < tail_fraction <= 0.9):
        raise ValueError(f"tail_fraction must lie in (0, 0.9], got {tail_fraction!r}")
    norms = traj.norms()
    if traj.overflowed:
        raise NotDecaying("trajectory overflowed; norm grew past 1e300")
    if len(norms) < 3:
        raise NotDecaying("trajectory too short for a tail fit")
    if not norms[-1] < norms[0]:
        raise NotDecaying(
            f"final norm {norms[-1]:.6g} did not drop below initial {norms[0]:.6g}"
        )
    n = len(norms)
    i0 = max(1, n - max(2, int(round(n * tail_fraction))))
    t = traj.times[i0:]
    y = norms[i0:]
    keep = y > 1e-300
    if np.count_nonzero(keep) < 2:
        raise NotDecaying("tail norms underflowed the 1e-300 guard")
    log_t = np.log(t[keep])
    log_y = np.log(y[keep])
    slope, intercept = np.polyfit(log_t, log_y, 1)
    fit = slope * log_t + intercept
    ss_res = float(np.sum((log_y - fit) ** 2))
    ss_tot = float(np.sum((log_y - np.mean(log_y)) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return DecayEstimate(
        slope=float(slope), tail_fraction=tail_fraction, r_squared=r_squared
    )
