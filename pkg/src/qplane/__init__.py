"""Exact computer algebra for the contractive quantum plane."""

from .coeff import DomainError, QParam, QQi, make_q, parse_scalar
from .series import Series1, Series2, SeriesError
from .qalgebra import QSeries, UsageError, qmul

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "QParam",
    "QQi",
    "make_q",
    "parse_scalar",
    "Series1",
    "Series2",
    "SeriesError",
    "QSeries",
    "UsageError",
    "qmul",
    "__version__",
]
