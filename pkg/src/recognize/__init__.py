"""Lattice reduction, algebraic recognition and field-generation certificates."""

from .certificates import (
    GenerationCertificate,
    NormalizedOrbit,
    certify_generation,
    ladder_precision,
    normalized_orbit,
    save_certificate,
)
from .lll import LLLReduction, find_integer_relation, is_lll_reduced, lll_reduce, relation_lattice
from .recognition import (
    RecognitionResult,
    evaluate_real_cyclotomic,
    exact_trace,
    galois_conjugates,
    rationality_check,
    real_cyclotomic_basis,
    real_cyclotomic_degree,
    recognize_real_cyclotomic,
)

__all__ = [
    "GenerationCertificate",
    "LLLReduction",
    "NormalizedOrbit",
    "RecognitionResult",
    "certify_generation",
    "evaluate_real_cyclotomic",
    "exact_trace",
    "find_integer_relation",
    "galois_conjugates",
    "is_lll_reduced",
    "ladder_precision",
    "lll_reduce",
    "normalized_orbit",
    "rationality_check",
    "real_cyclotomic_basis",
    "real_cyclotomic_degree",
    "recognize_real_cyclotomic",
    "relation_lattice",
    "save_certificate",
]
