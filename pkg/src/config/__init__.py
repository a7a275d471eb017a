"""Run configuration loading and validation."""
