"""Special functions: Gamma, modified Bessel K, Fox-Wright 1-Psi-1, the
stable signed kernels of even/odd order, and generalized Airy functions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from scipy import special as _scisp

from .errors import DomainError, PoleError, PrecisionLoss, SeriesDivergence
from .numerics import oscillatory_cos_halfline, integrate_halfline

# Fox-Wright series in double precision loses too many digits past this
# cancellation ratio; the evaluation is retried in extended precision.
# double precision keeps ~16 digits; a cancellation ratio above 1e8 leaves
# fewer than 8, not enough for the 1e-10 agreement the reductions demand
_CANCELLATION_LIMIT = 1e8
_MAX_TERMS = 2000


@dataclass(frozen=True)
class FoxWrightParams:
    alpha: float
    A: float
    beta: float
    B: float

    def __post_init__(self):
        if self.A <= 0 or self.B <= 0:
            raise SeriesDivergence("Fox-Wright weights A, B must be positive")
        if 1.0 + self.B - self.A <= 0:
            raise SeriesDivergence(
                f"convergence condition 1 + B - A > 0 violated: "
                f"A={self.A}, B={self.B}"
            )


def gamma(x: float) -> float:
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"gamma pole at {x}")
    return float(_scisp.gamma(x))


def bessel_k(nu: float, z: float) -> float:
    """Modified Bessel function of the second kind; K_{-nu} = K_nu."""
    if z <= 0:
        raise DomainError(f"bessel_k requires z > 0, got {z}")
    return float(_scisp.kv(abs(nu), z))


def bessel_k_quadrature(nu: float, z: float, abs_tol: float = 1e-10) -> float:
    """Independent oracle: K_nu(z) = int_0^inf exp(-z cosh s) cosh(nu s) ds."""
    if z <= 0:
        raise DomainError(f"bessel_k requires z > 0, got {z}")

    def f(s):
        arg = -z * math.cosh(s)
        if arg < -700:
            return 0.0
        return math.exp(arg) * math.cosh(nu * s)

    return integrate_halfline(f, "exponential", abs_tol).value


def fox_wright_11(p: FoxWrightParams, z: float) -> float:
    """Sum_{n>=0} Gamma(alpha + A n)/Gamma(beta + B n) * z^n / n!.

    Falls back to extended precision when term cancellation would destroy
    the double-precision result.
    """
    if not math.isfinite(z):
        raise DomainError("z must be finite")
    total = 0.0
    max_mag = 0.0
    converged = False
    for n in range(_MAX_TERMS):
        log_c = (
            math.lgamma(p.alpha + p.A * n)
            - math.lgamma(p.beta + p.B * n)
            - math.lgamma(n + 1)
        )
        if z == 0.0:
            term = math.exp(log_c) if n == 0 else 0.0
        else:
            mag = math.exp(log_c + n * math.log(abs(z)))
            term = -mag if (z < 0 and n % 2 == 1) else mag
        total += term
        max_mag = max(max_mag, abs(term))
        if n > 4 and abs(term) < 1e-17 * max(abs(total), 1e-300):
            converged = True
            break
    if not converged and z != 0.0:
        raise PrecisionLoss("Fox-Wright series did not converge within term budget")
    if max_mag > _CANCELLATION_LIMIT * max(abs(total), 1e-300):
        return _fox_wright_11_mp(p, z)
    return total


def _fox_wright_11_mp(p: FoxWrightParams, z: float, dps: int = 50) -> float:
    with mpmath.workdps(dps):
        zz = mpmath.mpf(z)
        total = mpmath.mpf(0)
        term_scale = mpmath.mpf(0)
        for n in range(_MAX_TERMS):
            term = (
                mpmath.gamma(p.alpha + p.A * n)
                / mpmath.gamma(p.beta + p.B * n)
                * zz**n
                / mpmath.factorial(n)
            )
            total += term
            term_scale = max(term_scale, abs(term))
            if n > 4 and abs(term) < mpmath.mpf(10) ** (-dps - 5) * term_scale:
                return float(total)
        raise PrecisionLoss("extended-precision Fox-Wright series did not converge")


def stable_signed_kernel(m: int, x: float, mu: int | None = None) -> float:
    """Inverse-Fourier kernel of the order-m dynamics.

    Even m: (1/pi) int_0^inf cos(x a) exp(-a^m/m) da.
    Odd m:  (1/pi) int_0^inf cos(x a + mu (-1)^((m-1)/2) a^m/m) da.
    """
    if m < 2:
        raise DomainError("order m must be >= 2")
    if m % 2 == 0:
        def f(a):
            damp = a**m / m
            if damp > 700:
                return 0.0
            return math.cos(x * a) * math.exp(-damp)

        res = integrate_halfline(f, "oscillatory_damped", abs_tol=1e-10)
        return res.value / math.pi
    if mu not in (+1, -1):
        raise DomainError("odd m requires mu in {+1, -1}")
    sign = mu * (-1) ** ((m - 1) // 2)
    # cos is even, so a sign flip of the polynomial term is a sign flip of x.
    arg = x if sign == 1 else -x
    return oscillatory_cos_halfline(arg, m, abs_tol=1e-7).value / math.pi


def airy_m(m: int, x: float) -> float:
    """Generalized Airy function (1/pi) int_0^inf cos(x a + a^m/m) da, odd m."""
    if m < 3 or m % 2 == 0:
        raise DomainError("airy_m requires odd m >= 3")
    if m == 3 and x > 4.0:
        # Exponentially small regime; the Bessel representation is stable
        # where lobe cancellation in doubles is not.
        return airy3_bessel(x)
    return oscillatory_cos_halfline(x, m, abs_tol=1e-7).value / math.pi


def airy3_bessel(x: float) -> float:
    """Closed form for the third-order case at x > 0 via Bessel K_{1/3}."""
    if x <= 0:
        raise DomainError("Bessel representation requires x > 0")
    return math.sqrt(x / 3.0) * bessel_k(1.0 / 3.0, 2.0 / 3.0 * x**1.5) / math.pi
