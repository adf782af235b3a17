"""Adaptive quadrature on finite and semi-infinite intervals.

Handles integrable power-law singularities via a local power substitution
and undamped oscillatory tails via lobe-wise integration with iterated
averaging of the alternating partial sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import integrate as _sciint
from scipy import optimize as _sciopt

from .errors import DomainError, InvalidInterval, NonConvergence, TailBoundUnavailable

DEFAULT_ABS_TOL = 1e-9
EVAL_BUDGET = 1_000_000

DECAY_HINTS = ("exponential", "gaussian", "oscillatory_damped")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise NonConvergence("quadrature produced a non-finite value")
        if self.error_estimate < 0 or self.evaluations < 1:
            raise DomainError("invalid quadrature result")


@dataclass(frozen=True)
class SingularityMark:
    """Integrand behaves like |lambda - location|**exponent near location."""

    location: float
    exponent: float

    def __post_init__(self):
        if not -1.0 < self.exponent < 0.0:
            raise DomainError(
                f"singularity exponent must lie in (-1, 0), got {self.exponent}"
            )


class _Budget:
    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def wrap(self, f):
        def counted(x):
            self.count += 1
            if self.count > EVAL_BUDGET:
                raise NonConvergence("evaluation budget exceeded")
            return f(x)

        return counted


def _quad_piece(f, lo, hi, tol):
    # full_output suppresses QUADPACK warnings; accuracy is checked by the
    # caller against the accumulated error estimate.
    out = _sciint.quad(f, lo, hi, epsabs=tol, epsrel=1e-12, limit=200, full_output=1)
    return out[0], out[1]


def integrate_finite(
    f: Callable[[float], float],
    a: float,
    b: float,
    marks: Sequence[SingularityMark] = (),
    abs_tol: float = DEFAULT_ABS_TOL,
) -> QuadratureResult:
    """Integrate f over [a, b] with optional integrable singularities.

    A subinterval touching a mark is transformed by u = |x - loc|**(1 + p)
    so the transformed integrand stays bounded.
    """
    if not a < b:
        raise InvalidInterval(f"need a < b, got [{a}, {b}]")
    if abs_tol <= 0:
        raise ValueError("abs_tol must be positive")

    budget = _Budget()
    g = budget.wrap(f)

    inner = sorted(
        (m for m in marks if a <= m.location <= b), key=lambda m: m.location
    )
    # Segment endpoints: a, mark locations, b. Each segment knows which of
    # its endpoints carry a singularity.
    points = [a] + [m.location for m in inner] + [b]
    exps = {m.location: m.exponent for m in inner}

    pieces = []  # (lo, hi, left_exp_or_None, right_exp_or_None)
    for lo, hi in zip(points[:-1], points[1:]):
        if hi - lo <= 0:
            continue
        le = exps.get(lo)
        re = exps.get(hi)
        if le is not None and re is not None:
            mid = 0.5 * (lo + hi)
            pieces.append((lo, mid, le, None))
            pieces.append((mid, hi, None, re))
        else:
            pieces.append((lo, hi, le, re))
    if not pieces:
        raise InvalidInterval("empty integration domain")

    tol = abs_tol / len(pieces)
    total = 0.0
    err_total = 0.0
    for lo, hi, le, re in pieces:
        if le is None and re is None:
            val, err = _quad_piece(g, lo, hi, tol)
        elif le is not None:
            q = 1.0 + le
            umax = (hi - lo) ** q

            def h(u, _lo=lo, _q=q):
                # Distance clamp: the transformed integrand is flat near u=0
                # and integrands may guard against exact singular hits.
                s = max(u ** (1.0 / _q), 1e-10)
                return g(_lo + s) * s ** (1.0 - _q) / _q

            val, err = _quad_piece(h, 0.0, umax, tol)
        else:
            q = 1.0 + re
            umax = (hi - lo) ** q

            def h(u, _hi=hi, _q=q):
                s = max(u ** (1.0 / _q), 1e-10)
                return g(_hi - s) * s ** (1.0 - _q) / _q

            val, err = _quad_piece(h, 0.0, umax, tol)
        total += val
        err_total += err

    if err_total > abs_tol:
        raise NonConvergence(
            f"finite quadrature error estimate {err_total:.3e} exceeds {abs_tol:.3e}"
        )
    return QuadratureResult(total, err_total, max(budget.count, 1))


def integrate_halfline(
    f: Callable[[float], float],
    decay_hint: str,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> QuadratureResult:
    """Integrate f over [0, inf) by progressive truncation.

    The decay hint sets the initial block length; blocks grow geometrically
    and integration stops once two consecutive blocks fall below tolerance.
    """
    if decay_hint not in DECAY_HINTS:
        raise TailBoundUnavailable(f"unknown decay hint {decay_hint!r}")
    if abs_tol <= 0:
        raise ValueError("abs_tol must be positive")

    budget = _Budget()
    g = budget.wrap(f)
    block = {"exponential": 8.0, "gaussian": 5.0, "oscillatory_damped": 8.0}[decay_hint]

    total = 0.0
    err_total = 0.0
    lo = 0.0
    small_streak = 0
    for _ in range(64):
        hi = lo + block
        val, err = _quad_piece(g, lo, hi, abs_tol / 8.0)
        total += val
        err_total += err
        if abs(val) < abs_tol / 4.0:
            small_streak += 1
            if small_streak >= 2:
                return QuadratureResult(total, err_total + abs_tol / 4.0, budget.count)
        else:
            small_streak = 0
        lo = hi
        block *= 1.6
    raise NonConvergence("halfline tail did not stabilize")


def _iterated_average(partials: Sequence[float]) -> float:
    """Euler-type acceleration: repeatedly average adjacent partial sums."""
    row = np.asarray(partials, dtype=float)
    while row.size > 1:
        row = 0.5 * (row[:-1] + row[1:])
    return float(row[0])


def oscillatory_cos_halfline(
    x: float, m: int, abs_tol: float = 1e-8
) -> QuadratureResult:
    """Evaluate int_0^inf cos(x*a + a**m / m) da for odd m >= 3.

    The phase is integrated lobe-by-lobe between consecutive zeros of the
    cosine; the alternating lobe sums are accelerated by iterated averaging.
    """
    if m < 3 or m % 2 == 0:
        raise DomainError("oscillatory kernel requires odd m >= 3")

    budget = _Budget()

    def phase(a):
        return x * a + a**m / m

    def dphase(a):
        return x + a ** (m - 1)

    f = budget.wrap(lambda a: math.cos(phase(a)))

    # Past the stationary point (x < 0) the phase increases monotonically.
    a_turn = 0.0 if x >= 0 else (-x) ** (1.0 / (m - 1))
    phi_start = phase(a_turn)

    # First cosine zero past the turning point.
    k0 = math.ceil((phi_start - math.pi / 2.0) / math.pi)
    piece_tol = abs_tol / 16.0

    def zero_of_phase(target, lo_guess):
        lo = lo_guess
        step = max(0.5, lo_guess * 0.1)
        hi = lo + step
        while phase(hi) < target:
            lo = hi
            hi += step
            step *= 1.5
        return _sciopt.brentq(lambda a: phase(a) - target, lo, hi, xtol=1e-14)

    prev = zero_of_phase(math.pi / 2.0 + k0 * math.pi, a_turn)
    head, head_err = _quad_piece(f, 0.0, prev, piece_tol)

    partials = []
    running = head
    est_prev = None
    stable = 0
    k = k0
    for _ in range(400):
        k += 1
        nxt = zero_of_phase(math.pi / 2.0 + k * math.pi, prev)
        lobe, _ = _quad_piece(f, prev, nxt, piece_tol)
        running += lobe
        partials.append(running)
        prev = nxt
        if len(partials) >= 8:
            est = _iterated_average(partials)
            if est_prev is not None and abs(est - est_prev) < abs_tol / 4.0:
                stable += 1
                if stable >= 2:
                    return QuadratureResult(
                        est, abs(est - est_prev) + head_err, budget.count
                    )
            else:
                stable = 0
            est_prev = est
    raise NonConvergence("oscillatory lobe sum did not stabilize")


def simpson_grid(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, n: int) -> float:
    """Fixed-grid Simpson rule; used as a brute-force test oracle."""
    if n % 2 == 1:
        n += 1
    xs = np.linspace(a, b, n + 1)
    ys = f(xs)
    return float(_sciint.simpson(ys, x=xs))
