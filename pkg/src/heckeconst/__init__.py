"""Exact expansions of Hecke triangle functions and p-adic checks on their constant terms."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BFileError,
    ParameterError,
    SeriesDivisionError,
    StabilizationError,
    WindowError,
)
from .exactnum import INFINITE, catalan, catalan_ord2_one, digit_sum, ord_p  # noqa: E402
from .hecke import (  # noqa: E402
    K,
    KBAR,
    CanonicalExpansion,
    HeckeParameters,
    bar_transform,
    canonical_expansion,
    constant_term,
)
from .series import LaurentSeries  # noqa: E402

__all__ = [
    "__version__",
    "BFileError",
    "ParameterError",
    "SeriesDivisionError",
    "StabilizationError",
    "WindowError",
    "INFINITE",
    "catalan",
    "catalan_ord2_one",
    "digit_sum",
    "ord_p",
    "K",
    "KBAR",
    "CanonicalExpansion",
    "HeckeParameters",
    "bar_transform",
    "canonical_expansion",
    "constant_term",
    "LaurentSeries",
]
