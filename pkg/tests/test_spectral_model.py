import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hheat.errors import DomainError, SingularPoint
from hheat.spectral_model import (
    SingularityComponent,
    SpectrumSpec,
    bessel_theta_identity_residual,
    c1,
    c2,
    covariance_r,
    example1_spectrum,
    example2_spectrum,
    spectral_density_f,
    spectral_density_f_vec,
    theta_kappa,
    theta_kappa_small_u,
)


def test_component_validation():
    SingularityComponent(0.5, 0.3, 1.0)
    with pytest.raises(DomainError):
        SingularityComponent(0.5, 1.0, 1.0)  # kappa outside (0,1)
    with pytest.raises(DomainError):
        SingularityComponent(-0.1, 0.3, 1.0)  # negative weight
    with pytest.raises(DomainError):
        SingularityComponent(0.5, 0.3, -1.0)  # negative frequency


def test_spectrum_structural_invariants():
    with pytest.raises(DomainError):
        # component 0 must sit at frequency zero
        SpectrumSpec((SingularityComponent(1.0, 0.3, 0.5),))
    with pytest.raises(DomainError):
        # weights must sum to one, no silent renormalization
        SpectrumSpec(
            (
                SingularityComponent(0.5, 0.3, 0.0),
                SingularityComponent(0.4, 0.4, 1.0),
            )
        )
    with pytest.raises(DomainError):
        # frequencies must be distinct
        SpectrumSpec(
            (
                SingularityComponent(0.5, 0.3, 0.0),
                SingularityComponent(0.25, 0.4, 1.0),
                SingularityComponent(0.25, 0.5, 1.0),
            )
        )


def test_example_spectra():
    s1 = example1_spectrum()
    assert s1.a0 == pytest.approx(0.20)
    assert s1.has_zero_singularity
    s2 = example2_spectrum()
    assert s2.a0 == 0.0
    assert not s2.has_zero_singularity
    assert [c.omega for c in s2.components] == [0.0, 0.8, 1.2, 2.0]


def test_covariance_at_zero_is_total_weight():
    assert covariance_r(example1_spectrum(), 0.0) == pytest.approx(1.0, abs=1e-15)
    assert covariance_r(example2_spectrum(), 0.0) == pytest.approx(1.0, abs=1e-15)


def test_covariance_is_even():
    spec = example1_spectrum()
    for x in (0.3, 1.7, 6.0):
        assert covariance_r(spec, x) == covariance_r(spec, -x)


def test_theta_zero_by_continuity():
    for kappa in (0.1, 0.5, 0.9):
        assert theta_kappa(kappa, 0.0) == 0.0


@settings(max_examples=40, deadline=None)
@given(kappa=st.floats(0.05, 0.95), u=st.floats(1e-4, 0.05))
def test_theta_small_u_expansion(kappa, u):
    # two-term expansion is an independent oracle for small arguments
    want = theta_kappa_small_u(kappa, u)
    got = theta_kappa(kappa, u)
    assert abs(got - want) < 5e-3 * max(abs(want), u ** (1.0 - kappa))


def test_bessel_theta_identity_spot_checks():
    for kappa in (0.2, 0.5, 0.8):
        for lam in (0.1, 1.0, 7.5):
            assert bessel_theta_identity_residual(kappa, lam) < 1e-10


def test_density_symmetry_and_positivity():
    spec = example1_spectrum()
    lams = np.array([0.31, 0.92, 1.55, 3.3, 7.7])
    f_pos = spectral_density_f_vec(spec, lams)
    f_neg = spectral_density_f_vec(spec, -lams)
    assert np.all(f_pos > 0.0)
    assert np.allclose(f_pos, f_neg, rtol=0, atol=1e-15)


def test_density_scalar_vector_agreement():
    spec = example2_spectrum()
    for lam in (0.25, 1.02, 4.4):
        v = float(spectral_density_f_vec(spec, np.array([lam]))[0])
        assert spectral_density_f(spec, lam) == pytest.approx(v, rel=1e-14)


def test_density_singular_points_guarded():
    spec = example1_spectrum()
    for loc in (0.0, 0.8, -1.2, 2.0):
        with pytest.raises(SingularPoint):
            spectral_density_f(spec, loc)


def test_c2_known_value():
    # c2(1/2) = 1 / (2 Gamma(1/2) cos(pi/4))
    want = 1.0 / (2.0 * math.sqrt(math.pi) * math.cos(math.pi / 4.0))
    assert c2(0.5) == pytest.approx(want, rel=1e-14)


def test_c1_known_value():
    # c1(1/2) = 2^{1/4} / (sqrt(pi) Gamma(1/4))
    from scipy.special import gamma as sgamma

    want = 2.0 ** 0.25 / (math.sqrt(math.pi) * float(sgamma(0.25)))
    assert c1(0.5) == pytest.approx(want, rel=1e-14)


def test_density_marks_cover_all_singularities():
    spec = example1_spectrum()
    locs = sorted(m.location for m in spec.density_marks())
    assert locs == [0.0, 0.8, 1.2, 2.0]
    spec0 = example2_spectrum()
    locs0 = sorted(m.location for m in spec0.density_marks())
    assert 0.0 not in locs0
