"""Dirichlet characters of prime-power conductor and exact cyclotomic values."""

from .cyclotomic import CyclotomicElement
from .galois import (
    GaloisAverageContext,
    galois_average,
    galois_average_bruteforce,
    subfield_trace_root_of_unity,
)
from .tables import (
    CharacterTable,
    DirichletCharacter,
    build_character_table,
    evaluate_complex,
    evaluate_exact,
    gauss_sum,
    gauss_sums_all,
    teichmuller_decompose,
    wild_characters,
)

__all__ = [
    "CharacterTable",
    "CyclotomicElement",
    "DirichletCharacter",
    "GaloisAverageContext",
    "build_character_table",
    "evaluate_complex",
    "evaluate_exact",
    "galois_average",
    "galois_average_bruteforce",
    "gauss_sum",
    "gauss_sums_all",
    "subfield_trace_root_of_unity",
    "teichmuller_decompose",
    "wild_characters",
]
