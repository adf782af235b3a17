"""Acceptance gate: the ten primary criteria, one pass/fail line each.

Each test calls the corresponding self-test criterion (the same functions
`hheat selftest` runs), prints its pass/fail line, and asserts both the
outcome and the stated runtime budget.
"""

import pytest

from hheat import cli

BUDGETS = {
    1: 5.0,
    2: 30.0,
    3: 1.0,
    4: 60.0,
    5: 600.0,
    6: 300.0,
    7: 1.0,
    8: 5.0,
    9: 5.0,
    10: 120.0,
}


def _check(result):
    print(result.line())
    assert result.seconds < BUDGETS[result.number], (
        f"criterion {result.number} exceeded its runtime budget: "
        f"{result.seconds:.1f}s >= {BUDGETS[result.number]}s"
    )
    assert result.passed, result.line()


def test_criterion_01_bessel_theta_identity():
    _check(cli.criterion_1_bessel_theta())


def test_criterion_02_fourier_pair():
    _check(cli.criterion_2_fourier_pair())


def test_criterion_03_m2_reduction_to_heat_kernel():
    _check(cli.criterion_3_m2_reduction())


def test_criterion_04_fox_wright_vs_quadrature():
    _check(cli.criterion_4_dual_path())


def test_criterion_05_monte_carlo_covariance_match():
    _check(cli.criterion_5_monte_carlo())


def test_criterion_06_residual_ladders():
    _check(cli.criterion_6_residual_ladders())


def test_criterion_07_naive_odd_divergence():
    _check(cli.criterion_7_naive_divergence())


def test_criterion_08_kernel_smoothing_identity():
    _check(cli.criterion_8_kernel_identity())


def test_criterion_09_stationarity_dichotomy():
    _check(cli.criterion_9_stationarity())


def test_criterion_10_qualitative_figure_regimes():
    _check(cli.criterion_10_figure_regimes())
