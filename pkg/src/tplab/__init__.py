"""Completability of partial totally positive matrix patterns."""

__version__ = "0.1.0"

from .atoms import Status, enumerate_u_atoms, one_var_catalysis, subset_completable
from .classify import ClassificationRecord, Classifier, Method, classify
from .matrix import PartialMatrix, is_partial_tp, is_tp
from .pattern import Pattern

__all__ = [
    "ClassificationRecord", "Classifier", "Method", "PartialMatrix", "Pattern", "Status",
    "classify", "enumerate_u_atoms", "is_partial_tp", "is_tp", "one_var_catalysis",
    "subset_completable", "__version__",
]
