"""Invariant self-test suite."""

from .selftest import CheckOutcome, SelfTestReport, SelfTestSuite

__all__ = ["CheckOutcome", "SelfTestReport", "SelfTestSuite"]
