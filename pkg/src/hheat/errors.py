"""Exception taxonomy shared across the package."""


class HHeatError(Exception):
    """Base class for all package-specific failures."""


class NonConvergence(HHeatError):
    """Quadrature or series did not reach the requested tolerance within budget."""


class InvalidInterval(HHeatError):
    """Integration interval is empty or reversed."""


class TailBoundUnavailable(HHeatError):
    """No usable decay hint for a semi-infinite integral."""


class PoleError(HHeatError):
    """Gamma evaluated at a non-positive integer."""


class DomainError(HHeatError):
    """Argument outside the operation's domain."""


class SeriesDivergence(HHeatError):
    """Fox-Wright convergence condition 1 + B - A > 0 violated."""


class PrecisionLoss(HHeatError):
    """Alternating-series cancellation exceeded the available precision."""


class SingularPoint(HHeatError):
    """Spectral density evaluated at (or too close to) a singular frequency."""


class RegimeMismatch(HHeatError):
    """Operation called with a spectrum/equation combination it does not cover."""


class GridMismatch(HHeatError):
    """Ensemble members or query points do not share the same grid."""


class ConfigError(HHeatError):
    """Run configuration failed validation."""
