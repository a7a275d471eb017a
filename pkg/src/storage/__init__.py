"""Coefficient cache and optional q-expansion downloads."""

from .coefficient_cache import DEFAULT_CACHE_DIR, CoefficientCache, resolve_form
from .fetch import QExpansionFetcher

__all__ = ["DEFAULT_CACHE_DIR", "CoefficientCache", "QExpansionFetcher", "resolve_form"]
