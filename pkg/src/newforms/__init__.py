"""Newform coefficient sources, Hecke eigenvalues and prime statistics."""

from .elliptic import CURVE_11A, EllipticCurve, ap_list, elliptic_ap
from .series import BUILTIN_FORMS, EtaQuotient
from .statistics import SATO_TATE_MEAN, lf_prime_set, satotate_pair_sum, satotate_sum
from .table import (
    LanglandsPair,
    NewformTable,
    eta_product_coefficients,
    hecke_sequence,
    hecke_value_primepower,
    lambda_value,
    langlands_from_lambda,
    langlands_pair,
    load_qexpansion,
    save_qexpansion,
    validate_table,
)

__all__ = [
    "BUILTIN_FORMS",
    "CURVE_11A",
    "EllipticCurve",
    "EtaQuotient",
    "LanglandsPair",
    "NewformTable",
    "SATO_TATE_MEAN",
    "ap_list",
    "elliptic_ap",
    "eta_product_coefficients",
    "hecke_sequence",
    "hecke_value_primepower",
    "lambda_value",
    "langlands_from_lambda",
    "langlands_pair",
    "lf_prime_set",
    "load_qexpansion",
    "satotate_pair_sum",
    "satotate_sum",
    "save_qexpansion",
    "validate_table",
]
