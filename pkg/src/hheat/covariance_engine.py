"""Theoretical covariances of the solution and limit fields.

The even-order limit covariances have closed Fox-Wright forms and quadrature
definitions; both paths are kept and cross-validated. The odd smoothed
covariances are Gaussian-damped cosine integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, GridMismatch, NonConvergence, PrecisionLoss, RegimeMismatch
from .field_simulator import EquationSpec, FieldRealization
from .numerics import SingularityMark, integrate_finite
from .special_functions import FoxWrightParams, fox_wright_11
from .spectral_model import SpectrumSpec, c2, spectral_density_f_vec
from .field_simulator import _limit_prefactor_a0zero

# Fox-Wright arguments below this switch to the quadrature definition
# (double-precision series cancellation budget).
SERIES_RELIABLE_Z = -25.0

# Gaussian envelope exp(-lam^2/2) support for odd-order integrals.
ODD_CUTOFF = 9.0


@dataclass(frozen=True)
class CovarianceQuery:
    t: float
    t_prime: float
    x: float
    x_prime: float

    def __post_init__(self):
        if self.t <= 0 or self.t_prime <= 0:
            raise DomainError("query times must be positive")

    @property
    def dt_sum(self) -> float:
        return self.t + self.t_prime

    @property
    def dt_diff(self) -> float:
        return self.t - self.t_prime

    @property
    def dx(self) -> float:
        return self.x - self.x_prime


@dataclass(frozen=True)
class EmpiricalCovariance:
    estimate: float
    standard_error: float
    replicates: int
    degenerate: bool = False


def _even_damped_cos(m: int, s: float, dx: float, power: float | None, abs_tol: float) -> float:
    """int_R |l|^power cos(l dx) e^{-s l^m} dl (power=None means no weight)."""
    cutoff = (40.0 / s) ** (1.0 / m)

    if power is None:
        def f(l):
            return math.cos(l * dx) * math.exp(-s * l**m)
        marks = []
    else:
        def f(l):
            return abs(l) ** power * math.cos(l * dx) * math.exp(-s * l**m)
        marks = [SingularityMark(0.0, power)]
    return 2.0 * integrate_finite(f, 0.0, cutoff, marks, abs_tol / 2.0).value


def cov_solution(spec: SpectrumSpec, eq: EquationSpec, q: CovarianceQuery,
                 abs_tol: float = 1e-6) -> float:
    """Covariance of u for even order: int cos(l dx) e^{-l^m (t+t')} f(l) dl."""
    if eq.parity != "even":
        raise RegimeMismatch("cov_solution covers the even-order solution")
    s = q.dt_sum
    cutoff = max((40.0 / s) ** (1.0 / eq.m), max(spec.singular_frequencies()) + 1.0)

    def f(l):
        arr = spectral_density_f_vec(spec, np.array([l]))
        return math.cos(l * q.dx) * math.exp(-s * l**eq.m) * float(arr[0])

    marks = spec.density_marks()
    return 2.0 * integrate_finite(f, 0.0, cutoff, marks, abs_tol / 2.0).value


def cov_limit_even_A0zero(spec: SpectrumSpec, m: int, q: CovarianceQuery,
                          force_quadrature: bool = False) -> float:
    if spec.has_zero_singularity:
        raise RegimeMismatch("spectrum has a zero-frequency singularity")
    if m % 2 != 0:
        raise RegimeMismatch("even-order covariance requires even m")
    pref = _limit_prefactor_a0zero(spec)
    s = q.dt_sum
    z = -q.dx**2 / (4.0 * s ** (2.0 / m))
    if force_quadrature or z < SERIES_RELIABLE_Z:
        return pref * _even_damped_cos(m, s, q.dx, None, 1e-9)
    fw = fox_wright_11(FoxWrightParams(1.0 / m, 2.0 / m, 0.5, 1.0), z)
    return pref * 2.0 * math.sqrt(math.pi) / (m * s ** (1.0 / m)) * fw


def cov_limit_even_A0nonzero(spec: SpectrumSpec, m: int, q: CovarianceQuery,
                             force_quadrature: bool = False) -> float:
    if not spec.has_zero_singularity:
        raise RegimeMismatch("spectrum has no zero-frequency singularity")
    if m % 2 != 0:
        raise RegimeMismatch("even-order covariance requires even m")
    k0 = spec.components[0].kappa
    a0 = spec.a0
    s = q.dt_sum
    z = -q.dx**2 / (4.0 * s ** (2.0 / m))
    if force_quadrature or z < SERIES_RELIABLE_Z:
        return a0 * c2(k0) * _even_damped_cos(m, s, q.dx, k0 - 1.0, 1e-9)
    fw = fox_wright_11(FoxWrightParams(k0 / m, 2.0 / m, 0.5, 1.0), z)
    return 2.0 * math.sqrt(math.pi) * a0 * c2(k0) / (m * s ** (k0 / m)) * fw


def cov_limit_even(spec: SpectrumSpec, m: int, q: CovarianceQuery, **kw) -> float:
    if spec.has_zero_singularity:
        return cov_limit_even_A0nonzero(spec, m, q, **kw)
    return cov_limit_even_A0zero(spec, m, q, **kw)


_CHUNK_PHASE = 60.0 * math.pi  # at most ~30 oscillations per quadrature chunk
_MAX_CHUNKS = 5000


def _odd_damped_cos(m: int, sign: int, dt: float, dx: float, power: float | None,
                    abs_tol: float) -> float:
    """int_R |l|^power cos(l dx + sign dt l^m) e^{-l^2/2} dl.

    cos(a+b) is split so both halves are even in l and the polynomial phase
    cannot be mishandled by a symmetric quadrature shortcut.  For fast phases
    (large m or |dt|) the domain is cut into chunks of bounded oscillation
    count, and the far tail is dropped once an integration-by-parts bound
    2 g(l0)/|phase'(l0)| certifies it below tolerance.
    """
    c = sign * dt
    p = 0.0 if power is None else power

    def f(l):
        a = l * dx
        b = c * l**m
        w = math.exp(-l * l / 2.0)
        base = math.cos(a) * math.cos(b) - math.sin(a) * math.sin(b)
        if power is None:
            return base * w
        return abs(l) ** power * base * w

    # Truncation point: beyond l0 the phase derivative dominates 2|dx| and
    # the envelope-over-phase-derivative ratio certifies the dropped tail.
    # g(l) = l^p e^{-l^2/2} is decreasing here (p <= 0), so one integration
    # by parts bounds |tail| by 2 g(l0) / min|phase'| on [l0, inf).
    trunc = ODD_CUTOFF
    trunc_bound = 0.0
    if c != 0.0:
        for l0 in np.linspace(0.5, ODD_CUTOFF, 35):
            slope_floor = abs(c) * m * l0 ** (m - 1) / 2.0
            if abs(c) * m * l0 ** (m - 1) < 2.0 * abs(dx):
                continue
            g0 = l0**p * math.exp(-l0 * l0 / 2.0)
            bound = 2.0 * g0 / slope_floor
            if bound <= abs_tol / 8.0:
                trunc = min(trunc, float(l0))
                trunc_bound = bound
                break

    # Chunk boundaries keep |dx| l + |c| l^m growth per chunk at ~30 cycles.
    def phase_mag(l):
        return abs(dx) * l + abs(c) * l**m

    total_phase = phase_mag(trunc)
    n_chunks = max(1, int(math.ceil(total_phase / _CHUNK_PHASE)))
    if n_chunks > _MAX_CHUNKS:
        raise NonConvergence(
            f"oscillatory covariance integrand needs {n_chunks} chunks "
            f"(cap {_MAX_CHUNKS}); phase {total_phase:.3g} too fast"
        )
    cuts = [0.0]
    for k in range(1, n_chunks):
        target = total_phase * k / n_chunks
        cuts.append(float(brentq(lambda l: phase_mag(l) - target, cuts[-1], trunc)))
    cuts.append(trunc)

    marks = [] if power is None else [SingularityMark(0.0, power)]
    tol_piece = (abs_tol / 2.0 - trunc_bound) / n_chunks
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        piece_marks = [mk for mk in marks if lo <= mk.location <= hi]
        total += integrate_finite(f, lo, hi, piece_marks, tol_piece).value
    return 2.0 * total


def cov_limit_odd_smoothed(spec: SpectrumSpec, eq: EquationSpec, q: CovarianceQuery,
                           abs_tol: float = 1e-6) -> float:
    """Covariance of the kernel-averaged odd-order limit field."""
    if eq.parity != "odd":
        raise RegimeMismatch("odd smoothed covariance requires odd m")
    sign = eq.phase_sign
    if spec.has_zero_singularity:
        k0 = spec.components[0].kappa
        pref = spec.a0 * c2(k0) / (4.0 * math.pi)
        return pref * _odd_damped_cos(eq.m, sign, q.dt_diff, q.dx, k0 - 1.0, abs_tol)
    pref = _limit_prefactor_a0zero(spec) / (4.0 * math.pi)
    return pref * _odd_damped_cos(eq.m, sign, q.dt_diff, q.dx, None, abs_tol)


def empirical_covariance(
    ensemble: list[FieldRealization] | np.ndarray,
    q: CovarianceQuery,
    t_grid=None,
    x_grid=None,
) -> EmpiricalCovariance:
    """Unbiased sample covariance across replicates at the two query points.

    Accepts either a list of FieldRealization sharing grids or the raw
    (replicates, nt, nx) array from realize_ensemble plus its grids.
    """
    if isinstance(ensemble, np.ndarray):
        if t_grid is None or x_grid is None:
            raise GridMismatch("raw ensemble values need t_grid and x_grid")
        values = ensemble
        tg = np.asarray(t_grid, dtype=float)
        xg = np.asarray(x_grid, dtype=float)
    else:
        if len(ensemble) < 2:
            raise GridMismatch("need at least 2 replicates")
        first = ensemble[0]
        for r in ensemble[1:]:
            if not (
                np.array_equal(r.t_grid, first.t_grid)
                and np.array_equal(r.x_grid, first.x_grid)
                and r.grid == first.grid
            ):
                raise GridMismatch("ensemble members do not share grids")
        values = np.stack([r.values for r in ensemble])
        tg, xg = first.t_grid, first.x_grid

    def index(grid, v, name):
        i = int(np.argmin(np.abs(grid - v)))
        if abs(grid[i] - v) > 1e-12:
            raise GridMismatch(f"{name}={v} not on the ensemble grid")
        return i

    a = values[:, index(tg, q.t, "t"), index(xg, q.x, "x")]
    b = values[:, index(tg, q.t_prime, "t'"), index(xg, q.x_prime, "x'")]
    n = a.size
    if n < 2:
        raise GridMismatch("need at least 2 replicates")
    da = a - a.mean()
    db = b - b.mean()
    est = float(np.dot(da, db) / (n - 1))
    # Delta-method SE from the sample fourth moment of the product.
    m22 = float(np.mean(da * da * db * db))
    var_hat = max(m22 - est * est, 0.0)
    se = math.sqrt(var_hat / n)
    degenerate = se == 0.0
    return EmpiricalCovariance(est, se, n, degenerate)
