"""Exception hierarchy shared by all modules."""


class CoolingError(Exception):
    """Base class for all errors raised by this package."""


class NegativeRate(CoolingError, ValueError):
    pass


class ZeroDrive(CoolingError, ValueError):
    """Rabi frequency is not positive, so the dressed-state angle is undefined."""


class DegenerateWidths(CoolingError, ZeroDivisionError):
    pass


class SecularPole(CoolingError, ZeroDivisionError):
    """4*OmegaR**2 - omega**2 is (numerically) zero."""


class AllLossless(CoolingError, ValueError):
    pass


class Unstable(CoolingError, ArithmeticError):
    """Moment drift matrix has an eigenvalue with non-negative real part."""

    def __init__(self, message, eigenvalues=None):
        super().__init__(message)
        self.eigenvalues = eigenvalues


class Singular(CoolingError, ArithmeticError):
    pass


class DimensionOverflow(CoolingError, MemoryError):
    pass


class DegenerateSteadyState(CoolingError, ArithmeticError):
    pass


class NoConvergence(CoolingError, ArithmeticError):
    pass


class ConfigError(CoolingError, ValueError):
    pass
