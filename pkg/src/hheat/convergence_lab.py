"""Deterministic L2 residuals certifying the scaling limits, ladder
experiments over eps, and the divergence of naive odd-order limits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RegimeMismatch
from .field_simulator import EquationSpec
from .numerics import SingularityMark, integrate_finite
from .spectral_model import SpectrumSpec, c2, theta_kappa
from .field_simulator import _limit_prefactor_a0zero

DEFAULT_LADDER = (1.0, 1e-1, 1e-2, 1e-3, 1e-4)

REGIMES = ("thm2", "thm3", "thm4", "thm5")


@dataclass(frozen=True)
class ResidualCurve:
    eps_ladder: tuple[float, ...]
    residuals: tuple[float, ...]
    quadrature_errors: tuple[float, ...]
    regime: str

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise DomainError(f"unknown regime {self.regime!r}")
        if any(r < 0 or not math.isfinite(r) for r in self.residuals):
            raise DomainError("residuals must be finite and nonnegative")


def _q_eps_a0zero(spec: SpectrumSpec, lam: float, eps: float) -> float:
    """Q_eps from the even-order A0=0 proof: shifted theta/power-law sum."""
    root = math.sqrt(eps)
    total = 0.0
    for comp in spec.active():
        if comp.omega == 0.0:
            continue
        for sign in (+1.0, -1.0):
            d = abs(lam * root + sign * comp.omega)
            total += (
                comp.weight
                * c2(comp.kappa)
                / 2.0
                * (1.0 - theta_kappa(comp.kappa, d))
                / d ** (1.0 - comp.kappa)
            )
    return total


def limit_constant_a0zero(spec: SpectrumSpec) -> float:
    """Pointwise limit of Q_eps: sum_j c2(k_j) A_j (1-theta(w_j))/w_j^{1-k_j}."""
    total = 0.0
    for comp in spec.active():
        if comp.omega == 0.0:
            continue
        total += (
            comp.weight
            * c2(comp.kappa)
            * (1.0 - theta_kappa(comp.kappa, comp.omega))
            / comp.omega ** (1.0 - comp.kappa)
        )
    return total


def _q_eps_a0nonzero(spec: SpectrumSpec, lam: float, eps: float) -> float:
    """Q_eps from the A0!=0 proof; tends to 1 pointwise."""
    root = math.sqrt(eps)
    k0 = spec.components[0].kappa
    a0 = spec.a0
    u = abs(lam) * root
    total = 1.0 - theta_kappa(k0, u)
    for comp in spec.active():
        if comp.omega == 0.0:
            continue
        inner = 0.0
        for sign in (+1.0, -1.0):
            d = abs(lam * root + sign * comp.omega)
            inner += (1.0 - theta_kappa(comp.kappa, d)) / d ** (1.0 - comp.kappa)
        total += (
            comp.weight * c2(comp.kappa) / (2.0 * a0 * c2(k0)) * u ** (1.0 - k0) * inner
        )
    return total


def _migrated_marks(spec: SpectrumSpec, eps: float, cutoff: float):
    """Marks at +-w_j / sqrt(eps) that still sit inside the quadrature cap."""
    root = math.sqrt(eps)
    marks = []
    for comp in spec.active():
        if comp.omega == 0.0:
            continue
        loc = comp.omega / root
        if loc < cutoff:
            marks.append(SingularityMark(loc, comp.kappa - 1.0))
    return marks


def _even_cutoff(m: int, t: float, eps: float) -> float:
    # Tail bound: the dropped mass is at most e^{-2 c^m t} * eps^{-1/2}.
    target = 45.0 + 0.5 * math.log(1.0 / eps)
    return (target / (2.0 * t)) ** (1.0 / m)


def residual_even_A0zero(spec: SpectrumSpec, m: int, t: float, eps: float,
                         abs_tol: float = 1e-8):
    if spec.has_zero_singularity:
        raise RegimeMismatch("regime thm2 requires A0 = 0")
    if m % 2 != 0:
        raise RegimeMismatch("even-order residual requires even m")
    if not 0.0 < eps <= 1.0 or t <= 0:
        raise DomainError("need eps in (0,1] and t > 0")
    L = limit_constant_a0zero(spec)
    sqrt_l = math.sqrt(L)
    cutoff = _even_cutoff(m, t, eps)

    def f(lam):
        diff = math.sqrt(_q_eps_a0zero(spec, lam, eps)) - sqrt_l
        return math.exp(-2.0 * lam**m * t) * diff * diff

    marks = _migrated_marks(spec, eps, cutoff)
    res = integrate_finite(f, 0.0, cutoff, marks, abs_tol / 2.0)
    return 2.0 * res.value, 2.0 * res.error_estimate


def residual_even_A0nonzero(spec: SpectrumSpec, m: int, t: float, eps: float,
                            abs_tol: float = 1e-8):
    if not spec.has_zero_singularity:
        raise RegimeMismatch("regime thm3 requires A0 != 0")
    if m % 2 != 0:
        raise RegimeMismatch("even-order residual requires even m")
    if not 0.0 < eps <= 1.0 or t <= 0:
        raise DomainError("need eps in (0,1] and t > 0")
    k0 = spec.components[0].kappa
    pref = spec.a0 * c2(k0)
    cutoff = _even_cutoff(m, t, eps)

    def f(lam):
        diff = math.sqrt(_q_eps_a0nonzero(spec, lam, eps)) - 1.0
        return math.exp(-2.0 * lam**m * t) * abs(lam) ** (k0 - 1.0) * diff * diff

    marks = [SingularityMark(0.0, k0 - 1.0)] + _migrated_marks(spec, eps, cutoff)
    res = integrate_finite(f, 0.0, cutoff, marks, abs_tol / 2.0)
    return 2.0 * pref * res.value, 2.0 * pref * res.error_estimate


def residual_odd_smoothed(spec: SpectrumSpec, eq: EquationSpec, t: float, eps: float,
                          abs_tol: float = 1e-8):
    """Gaussian-damped residual; the integrand carries no t dependence."""
    if eq.parity != "odd":
        raise RegimeMismatch("odd smoothed residual requires odd m")
    if not 0.0 < eps <= 1.0:
        raise DomainError("eps must lie in (0,1]")
    cutoff = 9.0
    if spec.has_zero_singularity:
        k0 = spec.components[0].kappa
        pref = spec.a0 * c2(k0) / (4.0 * math.pi)

        def f(lam):
            diff = math.sqrt(_q_eps_a0nonzero(spec, lam, eps)) - 1.0
            return math.exp(-lam * lam / 2.0) * abs(lam) ** (k0 - 1.0) * diff * diff

        marks = [SingularityMark(0.0, k0 - 1.0)] + _migrated_marks(spec, eps, cutoff)
    else:
        sqrt_l = math.sqrt(limit_constant_a0zero(spec))
        pref = 1.0 / (4.0 * math.pi)

        def f(lam):
            diff = math.sqrt(_q_eps_a0zero(spec, lam, eps)) - sqrt_l
            return math.exp(-lam * lam / 2.0) * diff * diff

        marks = _migrated_marks(spec, eps, cutoff)
    res = integrate_finite(f, 0.0, cutoff, marks, abs_tol / 2.0)
    return 2.0 * pref * res.value, 2.0 * pref * res.error_estimate


def regime_of(spec: SpectrumSpec, eq: EquationSpec) -> str:
    if eq.parity == "even":
        return "thm3" if spec.has_zero_singularity else "thm2"
    return "thm5" if spec.has_zero_singularity else "thm4"


def residual(spec: SpectrumSpec, eq: EquationSpec, t: float, eps: float,
             abs_tol: float = 1e-8):
    reg = regime_of(spec, eq)
    if reg == "thm2":
        return residual_even_A0zero(spec, eq.m, t, eps, abs_tol)
    if reg == "thm3":
        return residual_even_A0nonzero(spec, eq.m, t, eps, abs_tol)
    return residual_odd_smoothed(spec, eq, t, eps, abs_tol)


def residual_ladder(spec: SpectrumSpec, eq: EquationSpec, t: float,
                    eps_ladder=DEFAULT_LADDER, abs_tol: float = 1e-8) -> ResidualCurve:
    eps_ladder = tuple(eps_ladder)
    if any(e2 >= e1 for e1, e2 in zip(eps_ladder[:-1], eps_ladder[1:])):
        raise DomainError("eps ladder must be strictly decreasing")
    vals, errs = [], []
    for eps in eps_ladder:
        v, e = residual(spec, eq, t, eps, abs_tol)
        vals.append(v)
        errs.append(e)
    return ResidualCurve(eps_ladder, tuple(vals), tuple(errs), regime_of(spec, eq))


def naive_odd_variance(L: float, c: float, kappa0: float | None = None) -> float:
    """Truncated variance of the formally defined (divergent) odd limits.

    kappa0=None: c^2 int_{-L}^{L} dl = 2 c^2 L.
    kappa0 given: c^2 int_{-L}^{L} |l|^{k0-1} dl = 2 c^2 L^k0 / k0.
    Both grow without bound in L, which is the point.
    """
    if L <= 0:
        raise DomainError("L must be positive")
    if kappa0 is None:
        return 2.0 * c * c * L
    if not 0.0 < kappa0 < 1.0:
        raise DomainError("kappa0 must lie in (0,1)")
    return 2.0 * c * c * L**kappa0 / kappa0


def frozen_limit_residual(spec: SpectrumSpec, eq: EquationSpec, t: float) -> float:
    """Residual with Q_eps replaced by its analytic limit: identically zero.

    Kept as an executable statement of the consistency property.
    """
    reg = regime_of(spec, eq)
    if reg in ("thm2", "thm4"):
        L = limit_constant_a0zero(spec)
        diff = math.sqrt(L) - math.sqrt(L)
    else:
        diff = 1.0 - 1.0
    return diff * diff
