"""Exception types shared across the package."""


class BesovLabError(Exception):
    """Base class for all package errors."""


class InputError(BesovLabError):
    """A parameter is outside its documented domain."""


class CapabilityError(BesovLabError):
    """The request is valid but not supported by the implementation."""


class DivergenceError(BesovLabError):
    """An integral was detected to diverge (overflow guard tripped or
    analytically infinite for the given field/exponent combination)."""


class ResolutionError(BesovLabError):
    """A grid operation was requested below the resolvable scale."""


class FitError(BesovLabError):
    """An extrapolation fit is degenerate (rank loss or too few rows)."""


class SweepError(BesovLabError):
    """Every row of an epsilon sweep failed."""
