"""
Newform coefficient tables, Hecke relations and q-expansion files.

Coefficients are stored exactly (int64 or Python integers) for built-in forms
and as embedded reals for ingested non-rational forms; the normalized
eigenvalues lambda_f(n) = a_f(n) / n^((2k-1)/2) are computed in double precision.
"""

import os
from math import gcd
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np

from .arithmetic import divisor_counts, prime_power_part, smallest_prime_factors
from .series import BUILTIN_FORMS, EtaQuotient, expand_eta_quotient
from ..utils.errors import InsufficientCoefficientsError, ValidationError
from ..utils.logger import get_logger

# Relative tolerance for embedded-real coefficient files
FLOAT_TOLERANCE = 1e-9


@dataclass(eq=False)
class NewformTable:
    """Fourier coefficients a_f(0..N) of a holomorphic newform (a_f(0) = 0)."""
    label: str
    R: int
    two_kappa: int
    a: np.ndarray
    eps_f: int = 1
    lam: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.eps_f not in (1, -1):
            raise ValidationError(f"Form {self.label}: root number must be +1 or -1, got {self.eps_f}")
        n = np.arange(self.a.size, dtype=np.float64)
        n[0] = 1.0
        lam = np.asarray(self.a, dtype=np.float64) / n ** ((self.two_kappa - 1) / 2)
        lam[0] = 0.0
        lam.flags.writeable = False
        self.lam = lam

    @property
    def N(self) -> int:
        return self.a.size - 1

    @property
    def kappa(self) -> float:
        return self.two_kappa / 2

    @property
    def is_exact(self) -> bool:
        return self.a.dtype != np.float64

    def chi0(self, n: int) -> int:
        """Trivial character modulo the level."""
        return 1 if gcd(n, self.R) == 1 else 0

    def truncated(self, N: int) -> 'NewformTable':
        """Copy of the table restricted to n <= N."""
        if N > self.N:
            raise ValidationError(f"Cannot truncate {self.label} from N={self.N} to N={N}")
        return NewformTable(self.label, self.R, self.two_kappa, self.a[:N + 1].copy(), self.eps_f)

    def require(self, needed: int) -> None:
        """Raise InsufficientCoefficientsError when the table is shorter than needed."""
        if needed > self.N:
            raise InsufficientCoefficientsError(self.label, self.N, needed)


@dataclass(frozen=True)
class LanglandsPair:
    """Roots of X^2 - lambda_f(ell) X + chi0(ell)."""
    alpha: complex
    beta: complex

    def hecke_value(self, t: int) -> complex:
        """lambda_f(ell^t) = sum alpha^r beta^(t-r)."""
        return sum(self.alpha ** r * self.beta ** (t - r) for r in range(t + 1))


def lambda_value(table: NewformTable, n: int) -> float:
    """Normalized eigenvalue lambda_f(n)."""
    if n < 1 or n > table.N:
        raise InsufficientCoefficientsError(table.label, table.N, n)
    return float(table.lam[n])


def hecke_value_primepower(table: NewformTable, ell: int, t: int) -> float:
    """
    lambda_f(ell^t) from lambda_f(ell) by the Hecke recursion.

    Args:
        table: Newform table containing ell
        ell: Prime
        t: Exponent >= 0

    Returns:
        lambda_f(ell^t)
    """
    lam_ell = lambda_value(table, ell)
    chi0 = table.chi0(ell)
    prev, cur = 0.0, 1.0
    for _ in range(t):
        prev, cur = cur, lam_ell * cur - chi0 * prev
    return cur


def hecke_sequence(lam_ell: float, t_max: int, chi0: int = 1) -> np.ndarray:
    """lambda(ell^0..ell^t_max) from lambda(ell)."""
    out = np.zeros(t_max + 1)
    out[0] = 1.0
    if t_max >= 1:
        out[1] = lam_ell
    for t in range(2, t_max + 1):
        out[t] = lam_ell * out[t - 1] - chi0 * out[t - 2]
    return out


def langlands_from_lambda(lam_ell: float) -> LanglandsPair:
    """Roots of X^2 - lam X + 1, a double root when lam = +-2."""
    disc = lam_ell * lam_ell - 4.0
    if abs(disc) < 1e-12:
        return LanglandsPair(complex(lam_ell / 2), complex(lam_ell / 2))
    root = np.sqrt(complex(disc))
    return LanglandsPair(complex((lam_ell + root) / 2), complex((lam_ell - root) / 2))


def langlands_pair(table: NewformTable, ell: int) -> LanglandsPair:
    """
    Langlands parameters of f at an unramified prime.

    Raises:
        ValidationError: If ell divides the level
    """
    if table.R % ell == 0:
        raise ValidationError(f"Langlands parameters undefined at ell={ell} dividing the level {table.R}")
    return langlands_from_lambda(lambda_value(table, ell))


def _first_bad(mask: np.ndarray, positions: np.ndarray) -> Optional[int]:
    bad = np.nonzero(mask)[0]
    return int(positions[bad[0]]) if bad.size else None


def validate_table(table: NewformTable) -> None:
    """
    Check a_1 = 1, multiplicativity, the Hecke recursion and the Deligne bound.

    Raises:
        ValidationError: Naming the first offending n
    """
    N = table.N
    if N < 1:
        raise ValidationError(f"Form {table.label}: empty coefficient table")
    if table.a[1] != 1:
        raise ValidationError(f"Form {table.label}: a_1 = {table.a[1]}, expected 1")
    if N < 2:
        return

    spf = smallest_prime_factors(N)
    pp = prime_power_part(N)
    n = np.arange(N + 1, dtype=np.int64)
    lam = table.lam

    # Coprime multiplicativity a(n) = a(pp) a(n / pp)
    composite = np.nonzero((n >= 2) & (pp != n))[0]
    cof = composite // pp[composite]
    if table.is_exact:
        a = table.a.astype(object)
        mismatch = a[composite] != a[pp[composite]] * a[cof]
    else:
        expected = lam[pp[composite]] * lam[cof]
        mismatch = np.abs(lam[composite] - expected) > FLOAT_TOLERANCE * np.maximum(1.0, np.abs(expected))
    bad = _first_bad(np.asarray(mismatch, dtype=bool), composite)
    if bad is not None:
        raise ValidationError(f"Form {table.label}: multiplicativity fails at n={bad}")

    # Hecke recursion at prime powers ell^t, t >= 2
    powers = np.nonzero((n >= 4) & (pp == n) & (spf != n))[0]
    ell = spf[powers]
    if table.is_exact:
        a = table.a.astype(object)
        chi0 = np.array([table.chi0(int(x)) for x in ell], dtype=object)
        weight = np.array([int(x) ** (table.two_kappa - 1) for x in ell], dtype=object)
        expected = a[ell] * a[powers // ell] - chi0 * weight * a[powers // (ell * ell)]
        mismatch = a[powers] != expected
    else:
        chi0 = (table.R % ell != 0).astype(np.float64)
        expected = lam[ell] * lam[powers // ell] - chi0 * lam[powers // (ell * ell)]
        mismatch = np.abs(lam[powers] - expected) > FLOAT_TOLERANCE * np.maximum(1.0, np.abs(expected))
    bad = _first_bad(np.asarray(mismatch, dtype=bool), powers)
    if bad is not None:
        raise ValidationError(f"Form {table.label}: Hecke relation fails at n={bad}")

    # Deligne bound |lambda(n)| <= d(n)
    d = divisor_counts(N)
    over = np.abs(lam[1:]) > d[1:] * (1 + 1e-12)
    bad = _first_bad(over, n[1:])
    if bad is not None:
        raise ValidationError(f"Form {table.label}: Deligne bound fails at n={bad}")


def eta_product_coefficients(spec: Union[str, EtaQuotient], N: int) -> NewformTable:
    """
    Build a validated table for a built-in eta-product newform.

    Args:
        spec: 'delta', 'level11' or an EtaQuotient
        N: Coefficient bound

    Returns:
        NewformTable with exact coefficients
    """
    if isinstance(spec, str):
        if spec not in BUILTIN_FORMS:
            raise ValidationError(f"Unknown built-in form '{spec}' (choose from {sorted(BUILTIN_FORMS)})")
        spec = BUILTIN_FORMS[spec]
    if N < 1:
        raise ValidationError(f"Coefficient bound must be positive, got {N}")
    coeffs = expand_eta_quotient(spec, N)
    table = NewformTable(spec.label, spec.level, spec.two_kappa, coeffs, spec.eps)
    validate_table(table)
    return table


def _parse_value(token: str):
    try:
        return int(token)
    except ValueError:
        return float(token)


def load_qexpansion(path: str) -> NewformTable:
    """
    Read a q-expansion file and re-validate every table invariant.

    The first non-comment line is a header of key/value tokens
    ("label <s> level <R> weight <2k> eps <+-1>"; level and weight required),
    followed by lines "<n> <a_n>" for n = 1, 2, ... in order.

    Args:
        path: File path

    Returns:
        Validated NewformTable

    Raises:
        FileNotFoundError: If the file does not exist
        ValidationError: On parse errors or invariant violations
    """
    if not os.path.exists(path):
        raise FileNotFoundError(f"q-expansion file not found: {path}")

    header: Optional[Dict[str, str]] = None
    values = [0]
    with open(path, 'r', encoding='utf-8') as file:
        for lineno, raw in enumerate(file, start=1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if header is None:
                if len(tokens) % 2:
                    raise ValidationError(f"{path}:{lineno}: malformed header '{line}'")
                header = dict(zip(tokens[0::2], tokens[1::2]))
                continue
            if len(tokens) != 2:
                raise ValidationError(f"{path}:{lineno}: expected '<n> <a_n>', got '{line}'")
            try:
                index = int(tokens[0])
                value = _parse_value(tokens[1])
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: non-numeric entry '{line}'")
            if index != len(values):
                raise ValidationError(f"{path}:{lineno}: expected n={len(values)}, got n={index}")
            values.append(value)

    if header is None:
        raise ValidationError(f"{path}: missing header line")
    for key in ("level", "weight"):
        if key not in header:
            raise ValidationError(f"{path}: header is missing '{key}'")
    try:
        level = int(header["level"])
        weight = int(header["weight"])
        eps = int(header.get("eps", "1"))
    except ValueError:
        raise ValidationError(f"{path}: non-integer level, weight or eps in header")
    label = header.get("label", os.path.splitext(os.path.basename(path))[0])

    if any(isinstance(v, float) for v in values):
        a = np.array(values, dtype=np.float64)
    elif all(-2 ** 62 < v < 2 ** 62 for v in values):
        a = np.array(values, dtype=np.int64)
    else:
        a = np.array(values, dtype=object)

    table = NewformTable(label, level, weight, a, eps)
    validate_table(table)
    get_logger().info(f"Loaded q-expansion {path} (N={table.N})", label)
    return table


def save_qexpansion(table: NewformTable, path: str) -> None:
    """
    Write a table in the q-expansion file format.

    Args:
        table: Table to write
        path: Destination (parent directories are created)
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as file:
        file.write(f"label {table.label} level {table.R} weight {table.two_kappa} eps {table.eps_f:+d}\n")
        for n in range(1, table.N + 1):
            value = table.a[n]
            text = repr(float(value)) if not table.is_exact else str(int(value))
            file.write(f"{n} {text}\n")
