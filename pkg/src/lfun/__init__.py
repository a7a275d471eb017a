"""Twisted central L-values, approximate functional equations and Voronoi summation."""

from .afe import (
    METHOD_PRODUCT,
    METHOD_SINGLE,
    METHOD_SMOOTHED,
    PRODUCT_Y_CUTOFF,
    LValueRecord,
    lvalue_pair_product,
    lvalue_single,
    orbit_lvalues,
    orbit_pair_products,
    product_conductor,
    product_weight_for,
    root_number,
)
from .gamma import GammaFactorSpec, complex_log_gamma, gamma_spec
from .series import richardson, smoothed_central_value, smoothed_sum
from .voronoi import BesselTransform, VoronoiResult, bessel_decay_constant, bump_window, voronoi_check
from .weights import ProductWeight, afe_weight

__all__ = [
    "BesselTransform",
    "GammaFactorSpec",
    "LValueRecord",
    "METHOD_PRODUCT",
    "METHOD_SINGLE",
    "METHOD_SMOOTHED",
    "PRODUCT_Y_CUTOFF",
    "ProductWeight",
    "VoronoiResult",
    "afe_weight",
    "bessel_decay_constant",
    "bump_window",
    "complex_log_gamma",
    "gamma_spec",
    "lvalue_pair_product",
    "lvalue_single",
    "orbit_lvalues",
    "orbit_pair_products",
    "product_conductor",
    "product_weight_for",
    "richardson",
    "root_number",
    "smoothed_central_value",
    "smoothed_sum",
    "voronoi_check",
]
