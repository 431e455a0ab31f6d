"""Extension search, canonical forms, classification and the code database."""

from .canonical import CanonicalKey, CanonicalResult, canonical_form, canonical_multiset
from .classify import ClassifyStats, ResumeMismatch, classify
from .database import CodeDatabase, CodeRecord, CorruptDatabase, format_table
from .extension import Extension, ExtensionProblem, InconsistentPrescription, InfeasibleBudget, extensions, work_units
from .residual import ResidualOutput, residual_prescribed_search

__all__ = [
    "CanonicalKey",
    "CanonicalResult",
    "canonical_form",
    "canonical_multiset",
    "ClassifyStats",
    "ResumeMismatch",
    "classify",
    "CodeDatabase",
    "CodeRecord",
    "CorruptDatabase",
    "format_table",
    "Extension",
    "ExtensionProblem",
    "InconsistentPrescription",
    "InfeasibleBudget",
    "extensions",
    "work_units",
    "ResidualOutput",
    "residual_prescribed_search",
]
