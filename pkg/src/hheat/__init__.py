"""Simulation and numerical verification of scaling limits for high-order
heat-type equations driven by random initial conditions whose spectral
density carries singularities at zero and non-zero frequencies."""

from .covariance_engine import (
    CovarianceQuery,
    EmpiricalCovariance,
    cov_limit_even,
    cov_limit_even_A0nonzero,
    cov_limit_even_A0zero,
    cov_limit_odd_smoothed,
    cov_solution,
    empirical_covariance,
)
from .convergence_lab import (
    DEFAULT_LADDER,
    ResidualCurve,
    naive_odd_variance,
    residual,
    residual_ladder,
)
from .errors import (
    ConfigError,
    DomainError,
    GridMismatch,
    HHeatError,
    InvalidInterval,
    NonConvergence,
    PoleError,
    PrecisionLoss,
    RegimeMismatch,
    SeriesDivergence,
    SingularPoint,
)
from .field_simulator import (
    EquationSpec,
    FieldRealization,
    NoiseDraw,
    SpectralField,
    SpectralGrid,
    draw_noise,
    kernel_averaged_field,
    limit_even_field,
    limit_odd_smoothed_field,
    rescaled_field,
    solution_field,
)
from .special_functions import (
    FoxWrightParams,
    airy_m,
    bessel_k,
    fox_wright_11,
    gamma,
    stable_signed_kernel,
)
from .spectral_model import (
    SingularityComponent,
    SpectrumSpec,
    c1,
    c2,
    covariance_r,
    example1_spectrum,
    example2_spectrum,
    spectral_density_f,
    theta_kappa,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
