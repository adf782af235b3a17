import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import airy

from hheat.errors import DomainError, PoleError, SeriesDivergence
from hheat.special_functions import (
    FoxWrightParams,
    airy_m,
    bessel_k,
    bessel_k_quadrature,
    fox_wright_11,
    gamma,
    stable_signed_kernel,
)


def test_gamma_values_and_poles():
    assert gamma(5.0) == pytest.approx(24.0, rel=1e-14)
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    for bad in (0.0, -1.0, -7.0):
        with pytest.raises(PoleError):
            gamma(bad)


def test_bessel_k_domain():
    with pytest.raises(DomainError):
        bessel_k(0.3, 0.0)
    with pytest.raises(DomainError):
        bessel_k(0.3, -1.0)


def test_bessel_k_order_symmetry():
    for nu in (0.15, 0.4, 1.3):
        for z in (0.2, 1.0, 5.0):
            assert bessel_k(nu, z) == bessel_k(-nu, z)


def test_bessel_k_against_integral_representation():
    # independent oracle: K_nu(z) = int_0^inf e^{-z cosh s} cosh(nu s) ds
    for nu in (-0.45, 0.0, 0.35, 1.2):
        for z in (0.3, 1.0, 4.0):
            want = bessel_k_quadrature(nu, z)
            assert bessel_k(nu, z) == pytest.approx(want, rel=1e-9, abs=1e-12)


def test_fox_wright_params_divergence_guard():
    FoxWrightParams(0.5, 0.25, 0.5, 1.0)
    with pytest.raises(SeriesDivergence):
        # 1 + B - A <= 0 diverges for all nonzero z
        FoxWrightParams(0.5, 2.0, 0.5, 0.5)


@settings(max_examples=60, deadline=None)
@given(z=st.floats(-30.0, 0.0))
def test_fox_wright_exp_reduction(z):
    # alpha=beta, A=B=1 collapses the Gamma ratio: sum z^n/n! = e^z
    p = FoxWrightParams(1.0, 1.0, 1.0, 1.0)
    assert abs(fox_wright_11(p, z) - math.exp(z)) < 1e-10


def test_fox_wright_known_gaussian_case():
    # alpha=1/2, A=1/2, beta=1/2, B=1: terms Gamma(n/2+1/2)/Gamma(n/2+1/2)... use
    # independent mpmath oracle instead of a closed form.
    import mpmath as mp

    p = FoxWrightParams(0.5, 0.25, 0.5, 1.0)
    for z in (-8.0, -2.0, -0.5, 0.0, 1.5):
        want = float(
            mp.nsum(
                lambda n: mp.gamma(0.5 + 0.25 * n)
                / mp.gamma(0.5 + 1.0 * n)
                * mp.mpf(z) ** n
                / mp.factorial(n),
                [0, mp.inf],
            )
        )
        assert fox_wright_11(p, z) == pytest.approx(want, rel=1e-10, abs=1e-12)


def test_even_kernel_m2_closed_form():
    # (1/pi) int_0^inf cos(x a) e^{-a^2/2} da = e^{-x^2/2} / sqrt(2 pi)
    for x in (0.0, 0.4, 1.0, 2.5):
        want = math.exp(-x * x / 2.0) / math.sqrt(2.0 * math.pi)
        assert stable_signed_kernel(2, x) == pytest.approx(want, abs=1e-9)


def test_even_kernel_m4_sign_change():
    # higher-order kernels are signed: negative lobes exist
    xs = np.linspace(0.0, 6.0, 25)
    vals = [stable_signed_kernel(4, float(x)) for x in xs]
    assert min(vals) < -1e-4 and max(vals) > 0.1


def test_odd_kernel_requires_mu():
    with pytest.raises(DomainError):
        stable_signed_kernel(3, 1.0)


def test_odd_kernel_matches_airy():
    # m=3, mu=-1 is the classical Airy kernel
    for x in (-2.0, -0.5, 0.0, 0.8, 1.5):
        want = float(airy(x)[0])
        assert stable_signed_kernel(3, x, mu=-1) == pytest.approx(want, abs=1e-6)
    # mu=+1 mirrors the argument
    assert stable_signed_kernel(3, 1.1, mu=1) == pytest.approx(
        float(airy(-1.1)[0]), abs=1e-6
    )


def test_airy_m_consistency_across_routes():
    # the m=3 evaluator switches routes at x=4; both must agree with scipy
    for x in (3.5, 4.5, 6.0):
        assert airy_m(3, x) == pytest.approx(float(airy(x)[0]), abs=1e-6)


def test_airy_m_rejects_even_order():
    with pytest.raises(DomainError):
        airy_m(4, 1.0)
