import math

import numpy as np
import pytest
from scipy.integrate import simpson

from hheat.covariance_engine import (
    CovarianceQuery,
    cov_limit_even,
    cov_limit_even_A0nonzero,
    cov_limit_even_A0zero,
    cov_limit_odd_smoothed,
    cov_solution,
    empirical_covariance,
)
from hheat.errors import DomainError, GridMismatch, RegimeMismatch
from hheat.field_simulator import EquationSpec, _limit_prefactor_a0zero
from hheat.spectral_model import c2, example1_spectrum, example2_spectrum, theta_kappa


def test_query_validation():
    q = CovarianceQuery(1.0, 2.0, 0.5, -0.5)
    assert q.dt_sum == 3.0
    assert q.dt_diff == -1.0
    assert q.dx == 1.0
    with pytest.raises(DomainError):
        CovarianceQuery(0.0, 1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        CovarianceQuery(1.0, -1.0, 0.0, 0.0)


def test_m2_heat_kernel_closed_form():
    spec = example2_spectrum()
    const = sum(
        c.weight * c2(c.kappa) * (1.0 - theta_kappa(c.kappa, c.omega))
        / c.omega ** (1.0 - c.kappa)
        for c in spec.active()
    )
    for t, dx in ((0.4, 0.0), (1.0, 1.3), (2.0, 3.1)):
        q = CovarianceQuery(t, t, dx, 0.0)
        want = const * math.sqrt(math.pi) * math.exp(
            -dx * dx / (8.0 * t)
        ) / math.sqrt(2.0 * t)
        assert cov_limit_even_A0zero(spec, 2, q) == pytest.approx(want, abs=1e-12)


def test_series_and_quadrature_routes_agree():
    s0, s1 = example2_spectrum(), example1_spectrum()
    for m in (2, 4, 6):
        for t, tp, dx in ((0.5, 0.5, 0.0), (0.7, 1.9, 2.2), (1.5, 0.3, 4.0)):
            q = CovarianceQuery(t, tp, dx, 0.0)
            a = cov_limit_even_A0zero(s0, m, q)
            b = cov_limit_even_A0zero(s0, m, q, force_quadrature=True)
            assert a == pytest.approx(b, abs=1e-8)
            a = cov_limit_even_A0nonzero(s1, m, q)
            b = cov_limit_even_A0nonzero(s1, m, q, force_quadrature=True)
            assert a == pytest.approx(b, abs=1e-8)


def test_regime_dispatch():
    q = CovarianceQuery(1.0, 1.0, 0.5, 0.0)
    assert cov_limit_even(example2_spectrum(), 4, q) == pytest.approx(
        cov_limit_even_A0zero(example2_spectrum(), 4, q)
    )
    assert cov_limit_even(example1_spectrum(), 4, q) == pytest.approx(
        cov_limit_even_A0nonzero(example1_spectrum(), 4, q)
    )
    with pytest.raises(RegimeMismatch):
        cov_limit_even_A0zero(example1_spectrum(), 4, q)
    with pytest.raises(RegimeMismatch):
        cov_limit_even_A0nonzero(example2_spectrum(), 4, q)


def test_spatial_shift_invariance():
    spec = example1_spectrum()
    q1 = CovarianceQuery(0.8, 1.4, 2.0, 0.5)
    q2 = CovarianceQuery(0.8, 1.4, 5.0, 3.5)
    assert cov_limit_even(spec, 4, q1) == pytest.approx(
        cov_limit_even(spec, 4, q2), rel=1e-10
    )
    eq = EquationSpec(3, 1)
    assert cov_limit_odd_smoothed(spec, eq, q1) == pytest.approx(
        cov_limit_odd_smoothed(spec, eq, q2), rel=1e-10
    )


def test_odd_time_shift_invariance_even_violation():
    spec = example2_spectrum()
    eq = EquationSpec(3, 1)
    q1 = CovarianceQuery(0.5, 0.9, 1.0, 0.0)
    q2 = CovarianceQuery(2.5, 2.9, 1.0, 0.0)
    assert cov_limit_odd_smoothed(spec, eq, q1) == pytest.approx(
        cov_limit_odd_smoothed(spec, eq, q2), abs=1e-10
    )
    even1 = cov_limit_even(spec, 4, q1)
    even2 = cov_limit_even(spec, 4, q2)
    assert abs(even1 / even2 - 1.0) > 0.1


def test_odd_variance_closed_forms():
    # dt = dx = 0 reduces the cosine to 1: Gaussian / Gamma integrals
    q = CovarianceQuery(1.0, 1.0, 0.0, 0.0)
    s0 = example2_spectrum()
    want0 = _limit_prefactor_a0zero(s0) / (4.0 * math.pi) * math.sqrt(2.0 * math.pi)
    got0 = cov_limit_odd_smoothed(s0, EquationSpec(3, -1), q)
    assert got0 == pytest.approx(want0, rel=1e-9)

    s1 = example1_spectrum()
    k0 = s1.components[0].kappa
    from scipy.special import gamma as sgamma

    # int_R |l|^{k0-1} e^{-l^2/2} dl = 2^{k0/2} Gamma(k0/2)
    want1 = s1.a0 * c2(k0) / (4.0 * math.pi) * 2.0 ** (k0 / 2.0) * float(
        sgamma(k0 / 2.0)
    )
    got1 = cov_limit_odd_smoothed(s1, EquationSpec(3, -1), q)
    assert got1 == pytest.approx(want1, rel=1e-7)


def test_oscillatory_odd_covariance_against_simpson():
    # fast phase: chunked quadrature vs a 4M-point Simpson oracle
    spec = example2_spectrum()
    pref = _limit_prefactor_a0zero(spec) / (4.0 * math.pi)
    m, dt, dx, mu = 7, 5.0, 1.5, 1
    sign = mu * (-1) ** ((m - 1) // 2)
    lam = np.linspace(0.0, 9.0, 2_000_001)
    integ = np.cos(lam * dx + sign * dt * lam**m) * np.exp(-(lam**2) / 2.0)
    oracle = 2.0 * pref * float(simpson(integ, x=lam))
    got = cov_limit_odd_smoothed(
        spec, EquationSpec(m, mu), CovarianceQuery(0.5 + dt, 0.5, dx, 0.0)
    )
    assert got == pytest.approx(oracle, abs=1e-8)


def test_cov_solution_even_only_and_finite():
    spec = example1_spectrum()
    q = CovarianceQuery(0.5, 0.5, 1.0, 0.0)
    v = cov_solution(spec, EquationSpec(4), q)
    assert math.isfinite(v) and v > 0
    with pytest.raises(RegimeMismatch):
        cov_solution(spec, EquationSpec(3, 1), q)


def test_cov_solution_decays_in_time():
    spec = example2_spectrum()
    vals = [
        cov_solution(spec, EquationSpec(4), CovarianceQuery(t, t, 0.0, 0.0))
        for t in (0.2, 0.5, 1.0, 2.0)
    ]
    assert all(b < a for a, b in zip(vals[:-1], vals[1:]))


def test_empirical_covariance_known_gaussian():
    rng = np.random.default_rng(5)
    n = 20000
    rho_true = 0.6
    z = rng.standard_normal((n, 2))
    a = z[:, 0]
    b = rho_true * z[:, 0] + math.sqrt(1 - rho_true**2) * z[:, 1]
    values = np.stack([a, b], axis=1).reshape(n, 1, 2)
    q = CovarianceQuery(1.0, 1.0, 0.0, 1.0)
    est = empirical_covariance(values, q, [1.0], [0.0, 1.0])
    assert est.replicates == n
    assert not est.degenerate
    assert abs(est.estimate - rho_true) < 4.0 * est.standard_error
    assert est.standard_error < 0.02


def test_empirical_covariance_off_grid_query():
    values = np.zeros((10, 1, 2))
    q = CovarianceQuery(1.0, 1.0, 0.0, 0.5)
    with pytest.raises(GridMismatch):
        empirical_covariance(values, q, [1.0], [0.0, 1.0])
