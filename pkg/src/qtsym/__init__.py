"""Exact q,t-combinatorics: symmetric functions, Macdonald operators,
labelled Dyck paths, and a partial-symmetric-function recursion that ties
the two sides together.
"""

__version__ = "0.1.0"

from .config import Config, configured, get_config, set_config, update_config
from .errors import (
    CheckFailure,
    DegreeBoundError,
    DomainError,
    EvalPointError,
    ExactDivisionError,
    ParseError,
    QtsymError,
)
from .qt import QtRat

__all__ = [
    "Config",
    "configured",
    "get_config",
    "set_config",
    "update_config",
    "QtRat",
    "QtsymError",
    "DomainError",
    "DegreeBoundError",
    "EvalPointError",
    "ExactDivisionError",
    "ParseError",
    "CheckFailure",
]
