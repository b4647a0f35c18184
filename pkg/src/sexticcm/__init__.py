"""Exact computations around sextic CM-fields, their reduction, and embeddings into quaternion matrix algebras."""

from .errors import (
    BadReduction,
    InternalError,
    InvalidInput,
    NoWitness,
    NotFound,
    NotNormalizable,
    SexticCMError,
)

__version__ = "0.1.0"

__all__ = [
    "BadReduction",
    "InternalError",
    "InvalidInput",
    "NoWitness",
    "NotFound",
    "NotNormalizable",
    "SexticCMError",
    "__version__",
]
