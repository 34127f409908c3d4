"""Exact cohomology of hyperquot schemes on curves via a super-Fock model."""
from .curve import CurveClass, CurveRing, diagonal_class, integrate, push_diagonal
from .fock import FockElement, GeneratorKey, ModelParams, TruncationError, enumerate_basis
from .kernels import BACKEND
from .operators import (
    DomainError,
    apply_a,
    apply_b,
    apply_chern_quot,
    bracket_ba,
    chern_E_action,
    evaluate,
)

__version__ = "0.1.0"
