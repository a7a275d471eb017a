"""Canonical JSON reports and their CSV projection."""

from .report_writer import FORMATS, SCHEMA_VERSION, ReportWriter

__all__ = ["FORMATS", "SCHEMA_VERSION", "ReportWriter"]
