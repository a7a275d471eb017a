"""
Exact LLL reduction and integer relations.

The reduction is the integral variant: Gram determinants d_i and the scaled
Gram-Schmidt coefficients lambda_ij = d_j mu_ij are kept as Python integers,
so every step is exact and no floating point enters the basis.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath

from ..utils.errors import ValidationError
from ..utils.logger import get_logger

MAX_DIMENSION = 12

DEFAULT_DELTA = Fraction(99, 100)

Vector = Tuple[int, ...]


@dataclass
class LLLReduction:
    """A reduced basis together with the exact quantities the reduction tracked."""
    basis: List[Vector]
    gram_determinant: int
    swaps: int
    delta: Fraction

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def first(self) -> Vector:
        return self.basis[0]

    def orthogonality_defect(self) -> float:
        """prod |b_i|^2 / det(Gram), squared form of the Hadamard ratio; 1 for orthogonal bases."""
        product = 1
        for v in self.basis:
            product *= _dot(v, v)
        return float(Fraction(product, self.gram_determinant))

    def first_vector_bound(self) -> float:
        """
        Upper bound for |b_1|^2 implied by the Lovasz condition:
        (1 / (delta - 1/4))^((n-1)/2) det(Gram)^(1/n).
        """
        n = self.dimension
        alpha = 1 / float(self.delta - Fraction(1, 4))
        return alpha ** ((n - 1) / 2) * float(self.gram_determinant) ** (1 / n)


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def _check_basis(basis: Sequence[Sequence[int]]) -> List[List[int]]:
    rows = [list(row) for row in basis]
    if not rows:
        raise ValidationError("LLL needs at least one basis vector")
    if len(rows) > MAX_DIMENSION:
        raise ValidationError(f"LLL dimension is capped at {MAX_DIMENSION}, got {len(rows)}")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValidationError(f"Basis vector {i} has length {len(row)}, expected {width}")
        for value in row:
            if isinstance(value, bool) or int(value) != value:
                raise ValidationError(f"Basis vector {i} has a non-integer entry {value!r}")
    if width < len(rows):
        raise ValidationError(f"{len(rows)} vectors in dimension {width} cannot be independent")
    return [[int(value) for value in row] for row in rows]


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = DEFAULT_DELTA) -> LLLReduction:
    """
    LLL-reduce the rows of an integer matrix.

    Args:
        basis: Linearly independent integer row vectors, at most 12 of them
        delta: Lovasz parameter in (1/4, 1]

    Returns:
        LLLReduction whose basis satisfies size reduction and the Lovasz condition

    Raises:
        ValidationError: On rank deficiency or a malformed basis
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta <= 1:
        raise ValidationError(f"LLL delta must lie in (1/4, 1], got {delta}")
    rows = _check_basis(basis)
    n = len(rows)
    num, den = delta.numerator, delta.denominator

    # one-based: b[1..n], d[0..n], lam[k][j] for j < k
    b = [None] + rows
    d = [1] + [0] * n
    lam = [[0] * (n + 1) for _ in range(n + 1)]

    def add_vector(k: int) -> None:
        for j in range(1, k + 1):
            u = _dot(b[k], b[j])
            for i in range(1, j):
                u = (d[i] * u - lam[k][i] * lam[j][i]) // d[i - 1]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise ValidationError(f"LLL basis is rank deficient at vector {k - 1}")
                d[k] = u

    def size_reduce(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > d[l]:
            r = (2 * lam[k][l] + d[l]) // (2 * d[l])
            b[k] = [x - r * y for x, y in zip(b[k], b[l])]
            lam[k][l] -= r * d[l]
            for i in range(1, l):
                lam[k][i] -= r * lam[l][i]

    def swap(k: int, k_max: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(1, k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        mu = lam[k][k - 1]
        B = (d[k - 2] * d[k] + mu * mu) // d[k - 1]
        for i in range(k + 1, k_max + 1):
            t = lam[i][k]
            lam[i][k] = (d[k] * lam[i][k - 1] - mu * t) // d[k - 1]
            lam[i][k - 1] = (B * t + mu * lam[i][k]) // d[k]
        d[k - 1] = B

    add_vector(1)
    k, k_max, swaps = 2, 1, 0
    while k <= n:
        if k > k_max:
            k_max = k
            add_vector(k)
        size_reduce(k, k - 1)
        if den * d[k] * d[k - 2] < num * d[k - 1] ** 2 - den * lam[k][k - 1] ** 2:
            swap(k, k_max)
            swaps += 1
            k = max(2, k - 1)
            continue
        for l in range(k - 2, 0, -1):
            size_reduce(k, l)
        k += 1

    get_logger().debug(f"LLL n={n} swaps={swaps}", "lll")
    return LLLReduction(basis=[tuple(v) for v in b[1:]], gram_determinant=d[n], swaps=swaps, delta=delta)


def is_lll_reduced(basis: Sequence[Sequence[int]], delta: Fraction = DEFAULT_DELTA) -> bool:
    """Exact check of size reduction and the Lovasz condition by rational Gram-Schmidt."""
    rows = [[Fraction(x) for x in row] for row in basis]
    n = len(rows)
    star: List[List[Fraction]] = []
    norms: List[Fraction] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        v = list(rows[i])
        for j in range(i):
            mu[i][j] = _dot(rows[i], star[j]) / norms[j]
            v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
        star.append(v)
        norms.append(_dot(v, v))
        if norms[i] == 0:
            return False
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if norms[k] < (Fraction(delta) - mu[k][k - 1] ** 2) * norms[k - 1]:
            return False
    return True


def relation_lattice(values: Sequence, scale: int) -> List[Vector]:
    """
    Rows e_i followed by round(scale * x_i).

    A short vector (a_1..a_n, s) of this lattice has s = round-off of
    scale * sum a_i x_i, so small integer relations give short vectors.
    """
    n = len(values)
    if scale < 1:
        raise ValidationError(f"Relation scale must be a positive integer, got {scale}")
    rows = []
    for i, x in enumerate(values):
        scaled = int(mpmath.nint(mpmath.mpf(scale) * mpmath.mpf(x)))
        rows.append(tuple([1 if j == i else 0 for j in range(n)] + [scaled]))
    return rows


def find_integer_relation(values: Sequence, scale: int,
                          height_bound: Optional[int] = None) -> List[Vector]:
    """
    Candidate integer relations among values, shortest first.

    Args:
        values: Real numbers (floats or mpmath mpf)
        scale: Integer weight of the relation column
        height_bound: Drop candidates with a larger max coefficient

    Returns:
        Coefficient vectors a with sum a_i x_i small, sign-normalized so the
        first nonzero entry is positive; empty when none passes the bound
    """
    if len(values) < 2:
        raise ValidationError("An integer relation needs at least two values")
    reduced = lll_reduce(relation_lattice(values, scale))
    relations = []
    for row in reduced.basis:
        coeffs = row[:-1]
        if not any(coeffs):
            continue
        if height_bound is not None and max(abs(c) for c in coeffs) > height_bound:
            continue
        lead = next(c for c in coeffs if c)
        relations.append(tuple(c if lead > 0 else -c for c in coeffs))
    return relations
