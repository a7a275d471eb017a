"""
Exception hierarchy for WildTwist.

Validation failures map to exit code 1, numerical-contract failures to exit code 2.
"""

from typing import Optional


class ValidationError(ValueError):
    """Invalid input: a precondition, a flag, or a malformed data file."""


class InsufficientCoefficientsError(ValidationError):
    """A coefficient table is shorter than a computation requires."""

    def __init__(self, label: str, have: int, required: int):
        self.label = label
        self.have = have
        self.required = required
        super().__init__(
            f"Coefficient table '{label}' has N={have}, computation requires N >= {required}"
        )


class NumericalContractError(RuntimeError):
    """A numerical self-check (convergence, bound, cross-validation) failed."""

    def __init__(self, contract: str, detail: Optional[str] = None):
        self.contract = contract
        self.detail = detail
        message = f"Numerical contract '{contract}' failed"
        if detail:
            message += f": {detail}"
        super().__init__(message)
