"""Exception types raised across the package."""


class KGError(Exception):
    """Base class for all package errors."""


class NoPhysicalRoot(KGError):
    """No real root of the quantization condition survives the physical filters."""

    def __init__(self, message, n=None, gamma=None):
        super().__init__(message)
        self.n = n
        self.gamma = gamma


class UnboundedSpectrum(KGError):
    """The spectrum has no finite asymptote (gamma == 0)."""


class NonNormalizable(KGError):
    """The closed-form normalization denominator has the wrong sign."""


class InvalidDensity(KGError):
    """A logarithm of the density was requested where the density changes sign."""


class NormalizationMismatch(KGError):
    """The numerically integrated density differs from one beyond tolerance."""


class NoConvergence(KGError):
    """Adaptive quadrature hit its depth limit.

    ``value`` and ``error_estimate`` hold the best result reached.
    """

    def __init__(self, message, value=float("nan"), error_estimate=float("inf")):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
