"""Logging, errors, compensated summation and ordered parallel maps."""
