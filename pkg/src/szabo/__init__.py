"""Szabó operators of covariant derivative curvature tensors in indefinite signature."""

from .jordan import JordanStructure, jordan_decompose, rank_of
from .pseudo import PreconditionError, PseudoSpace, SelfAdjointOperator, Signature, inner
from .spectral import adams_number, char_poly_P, jordan_constancy, spectral_constancy, theorem_report
from .tensors import AcdtTensor, ActTensor, project_to_acdt, project_to_act, szabo, jacobi

__all__ = [
    "JordanStructure", "jordan_decompose", "rank_of",
    "PreconditionError", "PseudoSpace", "SelfAdjointOperator", "Signature", "inner",
    "adams_number", "char_poly_P", "jordan_constancy", "spectral_constancy", "theorem_report",
    "AcdtTensor", "ActTensor", "project_to_acdt", "project_to_act", "szabo", "jacobi",
]
