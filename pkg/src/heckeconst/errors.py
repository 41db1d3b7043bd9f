"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument is outside the domain an operation accepts."""


class SeriesDivisionError(ZeroDivisionError):
    """Division by a series whose leading coefficient is zero."""


class WindowError(IndexError):
    """A coefficient was requested outside the exactly-known window."""


class StabilizationError(RuntimeError):
    """Interpolation did not stabilize before the sampling cap."""


class BFileError(ValueError):
    """An OEIS b-file could not be parsed or aligned."""
