"""Covariance model with multiple spectral singularities.

The initial condition has covariance
    r(x) = sum_j A_j cos(w_j x) / (1 + x^2)^(kappa_j / 2),
whose spectral density is a weighted sum of Bessel-K terms singular at the
frequencies +-w_j. The bridge function theta_kappa links both forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as _scisp

from .errors import DomainError, SingularPoint
from .numerics import SingularityMark
from .special_functions import bessel_k, gamma

# Distance below which a density evaluation counts as hitting a singular point.
SINGULAR_GUARD = 1e-12


@dataclass(frozen=True)
class SingularityComponent:
    weight: float
    kappa: float
    omega: float

    def __post_init__(self):
        if not 0.0 < self.kappa < 1.0:
            raise DomainError(f"kappa must be in (0,1), got {self.kappa}")
        if self.weight < 0.0:
            raise DomainError(f"weight must be >= 0, got {self.weight}")
        if self.omega < 0.0:
            raise DomainError("omega must be >= 0 (symmetric pair is implicit)")


@dataclass(frozen=True)
class SpectrumSpec:
    components: tuple[SingularityComponent, ...]
    n: int = field(init=False)

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise DomainError("spectrum needs at least one component")
        if comps[0].omega != 0.0:
            raise DomainError("component 0 must carry omega = 0")
        omegas = [c.omega for c in comps]
        if any(w == 0.0 for w in omegas[1:]):
            raise DomainError("omega = 0 is only allowed at index 0")
        if len(set(omegas)) != len(omegas):
            raise DomainError("all omegas must be distinct")
        total = math.fsum(c.weight for c in comps)
        if abs(total - 1.0) > 1e-12:
            raise DomainError(
                f"weights must sum to 1 (got {total!r}); rebalance them explicitly"
            )
        object.__setattr__(self, "n", len(comps) - 1)

    @property
    def a0(self) -> float:
        return self.components[0].weight

    @property
    def has_zero_singularity(self) -> bool:
        return self.a0 != 0.0

    def active(self):
        """Components with positive weight (zero-weight terms are inert)."""
        return [c for c in self.components if c.weight > 0.0]

    def singular_frequencies(self) -> list[float]:
        return [c.omega for c in self.active()]

    def density_marks(self):
        """Singularity marks of f at the nonnegative frequencies +w_j."""
        return [
            SingularityMark(c.omega, c.kappa - 1.0)
            for c in self.active()
        ]


def example1_spectrum() -> SpectrumSpec:
    """Four-component spectrum with a zero-frequency singularity."""
    return SpectrumSpec(
        (
            SingularityComponent(0.20, 0.2, 0.0),
            SingularityComponent(0.20, 0.4, 0.8),
            SingularityComponent(0.35, 0.6, 1.2),
            SingularityComponent(0.25, 0.8, 2.0),
        )
    )


def example2_spectrum() -> SpectrumSpec:
    """Same cyclic components with the zero-frequency weight rebalanced away."""
    return SpectrumSpec(
        (
            SingularityComponent(0.00, 0.2, 0.0),
            SingularityComponent(0.40, 0.4, 0.8),
            SingularityComponent(0.35, 0.6, 1.2),
            SingularityComponent(0.25, 0.8, 2.0),
        )
    )


def covariance_r(spec: SpectrumSpec, x: float) -> float:
    base = (1.0 + x * x)
    return math.fsum(
        c.weight * math.cos(c.omega * x) / base ** (c.kappa / 2.0)
        for c in spec.components
    )


def c1(kappa: float) -> float:
    if not 0.0 < kappa < 1.0:
        raise DomainError(f"kappa must be in (0,1), got {kappa}")
    return 2.0 ** ((1.0 - kappa) / 2.0) / (math.sqrt(math.pi) * gamma(kappa / 2.0))


def c2(kappa: float) -> float:
    if not 0.0 < kappa < 1.0:
        raise DomainError(f"kappa must be in (0,1), got {kappa}")
    return 1.0 / (2.0 * gamma(kappa) * math.cos(kappa * math.pi / 2.0))


def theta_kappa(kappa: float, u: float) -> float:
    """Bridge between the Bessel-K and the pure power-law spectral forms.

    theta_kappa(0) = 0 by continuity; the value is bounded by 1 in modulus.
    """
    if u < 0:
        raise DomainError("u must be >= 0")
    if u == 0.0:
        return 0.0
    return 1.0 - (c1(kappa) / c2(kappa)) * bessel_k((kappa - 1.0) / 2.0, u) * u ** (
        (1.0 - kappa) / 2.0
    )


def theta_kappa_small_u(kappa: float, u: float) -> float:
    """Two-term expansion of theta_kappa near the origin (test oracle)."""
    lead = gamma((kappa + 1.0) / 2.0) / (2.0 ** (1.0 - kappa) * gamma((3.0 - kappa) / 2.0))
    return lead * u ** (1.0 - kappa) - u * u / (2.0 * (kappa + 1.0))


def _density_term(kappa: float, d: float) -> float:
    """Half-component c1(kappa)/2 * K_{(kappa-1)/2}(d) / d^{(1-kappa)/2}."""
    if d < SINGULAR_GUARD:
        raise SingularPoint(f"density evaluated within {SINGULAR_GUARD} of a singularity")
    return c1(kappa) / 2.0 * bessel_k((kappa - 1.0) / 2.0, d) / d ** ((1.0 - kappa) / 2.0)


def spectral_density_f(spec: SpectrumSpec, lam: float) -> float:
    total = 0.0
    for c in spec.active():
        total += c.weight * (
            _density_term(c.kappa, abs(lam + c.omega))
            + _density_term(c.kappa, abs(lam - c.omega))
        )
    return total


def spectral_density_f_vec(spec: SpectrumSpec, lam: np.ndarray) -> np.ndarray:
    """Vectorized density; the caller must keep lam away from +-w_j."""
    lam = np.asarray(lam, dtype=float)
    if np.any(
        np.min(
            np.abs(np.abs(lam)[:, None] - np.array(spec.singular_frequencies())[None, :]),
            axis=1,
        )
        < SINGULAR_GUARD
    ):
        raise SingularPoint("vectorized density evaluated at a singular frequency")
    total = np.zeros_like(lam)
    for c in spec.active():
        for w in (c.omega, -c.omega) if c.omega != 0.0 else (0.0, 0.0):
            d = np.abs(lam - w)
            total += (
                c.weight
                * c1(c.kappa)
                / 2.0
                * _scisp.kv((c.kappa - 1.0) / 2.0, d)
                / d ** ((1.0 - c.kappa) / 2.0)
            )
    return total


def bessel_theta_identity_residual(kappa: float, lam: float) -> float:
    """|LHS - RHS| of the Bessel/theta identity, both sides evaluated directly."""
    if lam <= 0:
        raise DomainError("lambda must be positive")
    lhs = c1(kappa) * bessel_k((kappa - 1.0) / 2.0, lam) * lam ** ((kappa - 1.0) / 2.0)
    rhs = c2(kappa) * (1.0 - theta_kappa(kappa, lam)) / lam ** (1.0 - kappa)
    return abs(lhs - rhs)
