"""Closed-form spectra of generalized permutation and generalized circulant matrices."""

from .circulant import CirculantSpec, FoldedSpec, fold
from .genperm import GenPermMatrix
from .shift import DomainError, ShiftPermutation
from .spectral import CaseTag, SpectralDecomposition, WrongCaseError, decompose
from .oracle import Tolerances, VerificationReport, verify

__all__ = [
    "CaseTag",
    "CirculantSpec",
    "DomainError",
    "FoldedSpec",
    "GenPermMatrix",
    "ShiftPermutation",
    "SpectralDecomposition",
    "Tolerances",
    "VerificationReport",
    "WrongCaseError",
    "decompose",
    "fold",
    "verify",
]

__version__ = "0.1.0"
