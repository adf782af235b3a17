import math

import pytest

from hheat.convergence_lab import (
    DEFAULT_LADDER,
    ResidualCurve,
    _q_eps_a0nonzero,
    _q_eps_a0zero,
    frozen_limit_residual,
    limit_constant_a0zero,
    naive_odd_variance,
    regime_of,
    residual,
    residual_even_A0nonzero,
    residual_even_A0zero,
    residual_ladder,
    residual_odd_smoothed,
)
from hheat.errors import DomainError, RegimeMismatch
from hheat.field_simulator import EquationSpec
from hheat.spectral_model import example1_spectrum, example2_spectrum


def test_regime_classification():
    assert regime_of(example2_spectrum(), EquationSpec(4)) == "thm2"
    assert regime_of(example1_spectrum(), EquationSpec(4)) == "thm3"
    assert regime_of(example2_spectrum(), EquationSpec(3, 1)) == "thm4"
    assert regime_of(example1_spectrum(), EquationSpec(3, 1)) == "thm5"


def test_regime_mismatch_errors():
    with pytest.raises(RegimeMismatch):
        residual_even_A0zero(example1_spectrum(), 4, 1.0, 0.1)
    with pytest.raises(RegimeMismatch):
        residual_even_A0nonzero(example2_spectrum(), 4, 1.0, 0.1)
    with pytest.raises(RegimeMismatch):
        residual_even_A0zero(example2_spectrum(), 3, 1.0, 0.1)
    with pytest.raises(RegimeMismatch):
        residual_odd_smoothed(example2_spectrum(), EquationSpec(4), 1.0, 0.1)


def test_eps_domain():
    with pytest.raises(DomainError):
        residual_even_A0zero(example2_spectrum(), 4, 1.0, 0.0)
    with pytest.raises(DomainError):
        residual_even_A0zero(example2_spectrum(), 4, 1.0, 1.5)
    with pytest.raises(DomainError):
        residual_even_A0zero(example2_spectrum(), 4, -1.0, 0.1)


def test_q_eps_pointwise_limits():
    # Q_eps(lambda) tends to the limit constant (A0 = 0) or to 1 (A0 != 0)
    s0, s1 = example2_spectrum(), example1_spectrum()
    L = limit_constant_a0zero(s0)
    for lam in (0.3, 1.0, 2.5):
        assert _q_eps_a0zero(s0, lam, 1e-10) == pytest.approx(L, rel=1e-4)
        assert _q_eps_a0nonzero(s1, lam, 1e-10) == pytest.approx(1.0, rel=1e-3)


def test_residual_vanishes_along_ladder():
    curve = residual_ladder(example2_spectrum(), EquationSpec(4), 1.0)
    r = curve.residuals
    assert curve.regime == "thm2"
    assert all(v > 0 for v in r)
    assert all(b < a for a, b in zip(r[:-1], r[1:]))
    assert r[-1] / r[0] < 0.05
    assert all(e < 1e-7 for e in curve.quadrature_errors)


def test_ladder_must_decrease():
    with pytest.raises(DomainError):
        residual_ladder(example2_spectrum(), EquationSpec(4), 1.0,
                        eps_ladder=(0.1, 0.1))


def test_residual_dispatch_matches_specific_ops():
    t, eps = 1.0, 0.01
    v, _ = residual(example1_spectrum(), EquationSpec(3, -1), t, eps)
    w, _ = residual_odd_smoothed(example1_spectrum(), EquationSpec(3, -1), t, eps)
    assert v == w
    v, _ = residual(example2_spectrum(), EquationSpec(6), t, eps)
    w, _ = residual_even_A0zero(example2_spectrum(), 6, t, eps)
    assert v == w


def test_residual_curve_validation():
    with pytest.raises(DomainError):
        ResidualCurve((1.0,), (-1.0,), (0.0,), "thm2")
    with pytest.raises(DomainError):
        ResidualCurve((1.0,), (1.0,), (0.0,), "thm9")


def test_naive_odd_variance_closed_forms():
    c, k0 = 1.3, 0.4
    for L in (10.0, 100.0, 1000.0, 10000.0):
        assert naive_odd_variance(L, c) == 2.0 * c * c * L
        assert naive_odd_variance(L, c, k0) == 2.0 * c * c * L**k0 / k0
    with pytest.raises(DomainError):
        naive_odd_variance(0.0, c)
    with pytest.raises(DomainError):
        naive_odd_variance(1.0, c, 1.2)


def test_frozen_limit_residual_is_zero():
    for spec, eq in (
        (example2_spectrum(), EquationSpec(4)),
        (example1_spectrum(), EquationSpec(3, 1)),
    ):
        assert frozen_limit_residual(spec, eq, 1.0) == 0.0


def test_residual_decreases_in_time_even_regime():
    # stronger damping at larger t shrinks the residual
    spec = example2_spectrum()
    r1, _ = residual_even_A0zero(spec, 4, 0.5, 0.1)
    r2, _ = residual_even_A0zero(spec, 4, 2.0, 0.1)
    assert r2 < r1
