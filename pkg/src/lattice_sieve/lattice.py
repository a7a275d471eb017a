"""
The congruence lattice {(m, n) : l1 m = xi l2 n mod q} and point counts in it.

The lattice has basis (q, 0), (c, 1) with c = xi l2 / l1 mod q, so the points
with a given n are exactly m = c n mod q. All counts below are exact integer
enumerations row by row in n.
"""

from dataclasses import dataclass, field
from math import ceil, gcd, isqrt, sqrt
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy.ntheory import n_order

from ..utils.errors import NumericalContractError, ValidationError
from ..utils.logger import get_logger
from ..utils.parallel import ordered_map

Vector = Tuple[int, int]


@dataclass(frozen=True)
class CongruenceLattice:
    """Lambda = {(m, n) in Z^2 : l1 m = xi l2 n mod q}."""
    q: int
    l1: int
    l2: int
    xi: int

    def __post_init__(self):
        if self.q < 2:
            raise ValidationError(f"Lattice modulus must be at least 2, got {self.q}")
        if self.l1 < 1 or self.l2 < 1 or gcd(self.l1 * self.l2, self.q) != 1:
            raise ValidationError(f"l1={self.l1}, l2={self.l2} must be positive and coprime to {self.q}")
        if gcd(self.xi, self.q) != 1:
            raise ValidationError(f"xi={self.xi} must be a unit modulo {self.q}")

    @property
    def c(self) -> int:
        """Slope c with (m, n) in Lambda iff m = c n mod q."""
        return self.xi * self.l2 * pow(self.l1, -1, self.q) % self.q

    @property
    def basis(self) -> Tuple[Vector, Vector]:
        return (self.q, 0), (self.c, 1)

    @property
    def d(self) -> int:
        """Multiplicative order of xi modulo q."""
        return int(n_order(self.xi % self.q, self.q))

    @property
    def separated(self) -> bool:
        """xi - 1 and xi + 1 are both units, so l1 m = +-l2 n forces q | n."""
        return gcd((self.xi - 1) * (self.xi + 1), self.q) == 1

    @property
    def shortest_bound(self) -> float:
        """q^(1/d) / (2 max(l1, l2))."""
        return self.q ** (1.0 / self.d) / (2 * max(self.l1, self.l2))

    def contains(self, m: int, n: int) -> bool:
        return (self.l1 * m - self.xi * self.l2 * n) % self.q == 0

    def sublattice_basis(self, d1: int, d2: int) -> Tuple[Vector, Vector]:
        """
        Basis of {(m, n) in Lambda : d1 | m, d2 | n}.

        Raises:
            ValidationError: If gcd(d1 d2, q) != 1
        """
        if d1 < 1 or d2 < 1 or gcd(d1 * d2, self.q) != 1:
            raise ValidationError(f"Divisors d1={d1}, d2={d2} must be positive and coprime to q={self.q}")
        c = self.xi * self.l2 * d2 * pow(self.l1 * d1, -1, self.q) % self.q
        return (d1 * self.q, 0), (d1 * c, d2)

    def to_dict(self) -> Dict[str, Any]:
        return {"q": self.q, "l1": self.l1, "l2": self.l2, "xi": self.xi % self.q, "d": self.d,
                "basis": [list(v) for v in self.basis]}


@dataclass
class ReducedBasis:
    """Lagrange-Gauss reduced basis with |v1| <= |v2|."""
    v1: Vector
    v2: Vector
    shortest: float
    covolume: int
    lower_bound: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"v1": list(self.v1), "v2": list(self.v2), "shortest": self.shortest,
                "covolume": self.covolume, "lower_bound": self.lower_bound}


@dataclass
class BoxCount:
    """Points of Lambda in [M, 2M) x [N, 2N) against MN/q."""
    M: int
    N: int
    count: int
    prediction: float
    envelope: float

    @property
    def deviation(self) -> float:
        return abs(self.count - self.prediction)

    @property
    def ratio(self) -> float:
        return self.deviation / self.envelope

    def to_dict(self) -> Dict[str, Any]:
        return {"M": self.M, "N": self.N, "count": self.count, "prediction": self.prediction,
                "deviation": self.deviation, "envelope": self.envelope, "ratio": self.ratio}


@dataclass
class BallCount:
    """Nonzero points of Lambda with norm at most T against T^2/q + T/s."""
    T: float
    count: int
    envelope: float

    @property
    def ratio(self) -> float:
        return self.count / self.envelope

    def to_dict(self) -> Dict[str, Any]:
        return {"T": self.T, "count": self.count, "envelope": self.envelope, "ratio": self.ratio}


@dataclass
class SieveCheck:
    """|count - X/(d1 d2)| / Y over divisor pairs for one box."""
    M: int
    N: int
    X: float
    Y: float
    rows: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def worst(self) -> float:
        return max((row["constant"] for row in self.rows), default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {"M": self.M, "N": self.N, "X": self.X, "Y": self.Y, "worst": self.worst, "rows": self.rows}


def _norm2(v: Vector) -> int:
    return v[0] * v[0] + v[1] * v[1]


def gauss_reduce(lattice: CongruenceLattice, basis: Optional[Tuple[Vector, Vector]] = None) -> ReducedBasis:
    """
    Two-dimensional Lagrange-Gauss reduction in exact integer arithmetic.

    Args:
        lattice: Congruence lattice (its basis is used unless one is given)
        basis: Alternative basis of the same lattice

    Returns:
        ReducedBasis whose first vector is a shortest nonzero vector

    Raises:
        ValidationError: If the basis is degenerate
        NumericalContractError: If xi separates +-1 and the shortest vector is
            below q^(1/d) / (2 max(l1, l2))
    """
    v1, v2 = basis or lattice.basis
    det = v1[0] * v2[1] - v1[1] * v2[0]
    if det == 0:
        raise ValidationError(f"Degenerate lattice basis {v1}, {v2}")
    if _norm2(v1) > _norm2(v2):
        v1, v2 = v2, v1
    while True:
        dot = v1[0] * v2[0] + v1[1] * v2[1]
        n1 = _norm2(v1)
        # nearest integer to dot / n1
        mu = (2 * dot + n1) // (2 * n1)
        v2 = (v2[0] - mu * v1[0], v2[1] - mu * v1[1])
        if _norm2(v2) < n1:
            v1, v2 = v2, v1
        else:
            break

    shortest = sqrt(_norm2(v1))
    result = ReducedBasis(v1=v1, v2=v2, shortest=shortest, covolume=abs(det))
    if lattice.separated and lattice.xi % lattice.q not in (1, lattice.q - 1):
        bound = lattice.shortest_bound
        result.lower_bound = bound
        passed = shortest >= bound
        get_logger().log_contract("shortest_vector_bound", passed, f"s={shortest:.6g}, bound={bound:.6g}",
                                  f"q={lattice.q} xi={lattice.xi}")
        if not passed:
            raise NumericalContractError("shortest_vector_bound",
                                         f"s={shortest:.6g} < {bound:.6g} for q={lattice.q}, xi={lattice.xi}")
    return result


def _class_count(lo: np.ndarray, hi: np.ndarray, residue: np.ndarray, q: int) -> np.ndarray:
    """Number of integers in [lo, hi] congruent to residue mod q (empty when hi < lo)."""
    counts = np.floor_divide(hi - residue, q) - np.floor_divide(lo - 1 - residue, q)
    return np.where(hi >= lo, counts, 0)


def _rect_count(q: int, c: int, m_lo: int, m_hi: int, n_lo: int, n_hi: int) -> int:
    if n_hi < n_lo or m_hi < m_lo:
        return 0
    n = np.arange(n_lo, n_hi + 1, dtype=np.int64)
    residue = (c * n) % q
    lo = np.full(n.size, m_lo, dtype=np.int64)
    hi = np.full(n.size, m_hi, dtype=np.int64)
    return int(np.sum(_class_count(lo, hi, residue, q)))


def box_envelope(lattice: CongruenceLattice, M: int, N: int, shortest: float) -> float:
    """1 + min(min(M, N) + (M + N)/q, (M + N)/s)."""
    q = lattice.q
    return 1 + min(min(M, N) + (M + N) / q, (M + N) / shortest)


def box_count(lattice: CongruenceLattice, M: int, N: int, shortest: Optional[float] = None) -> BoxCount:
    """
    Exact count of Lambda in [M, 2M) x [N, 2N).

    Raises:
        ValidationError: If M or N is below 1
    """
    if M < 1 or N < 1:
        raise ValidationError(f"Box sides must be at least 1, got M={M}, N={N}")
    if shortest is None:
        shortest = gauss_reduce(lattice).shortest
    count = _rect_count(lattice.q, lattice.c, M, 2 * M - 1, N, 2 * N - 1)
    return BoxCount(M=M, N=N, count=count, prediction=M * N / lattice.q,
                    envelope=box_envelope(lattice, M, N, shortest))


def box_count_samples(lattice: CongruenceLattice, samples: int, max_side: int, seed: int = 0,
                      threads: Optional[int] = None) -> Dict[str, Any]:
    """
    box_count over seeded random (M, N) in [1, max_side]^2.

    Returns:
        Dictionary with every sample and the largest deviation / envelope ratio
    """
    rng = np.random.default_rng(seed)
    sides = rng.integers(1, max_side + 1, size=(samples, 2))
    shortest = gauss_reduce(lattice).shortest
    results = ordered_map(lambda mn: box_count(lattice, int(mn[0]), int(mn[1]), shortest),
                          list(sides), threads=threads, chunk_size=16)
    worst = max(result.ratio for result in results)
    get_logger().log_stage("box_count_samples", f"q={lattice.q}", samples=samples, worst=f"{worst:.4g}")
    return {"lattice": lattice.to_dict(), "seed": seed, "samples": [r.to_dict() for r in results],
            "max_ratio": worst}


def ball_count(lattice: CongruenceLattice, T: float, shortest: Optional[float] = None) -> BallCount:
    """Exact count of nonzero points with m^2 + n^2 <= T^2."""
    if T < 0:
        raise ValidationError(f"Radius must be non-negative, got {T}")
    if shortest is None:
        shortest = gauss_reduce(lattice).shortest
    limit = int(np.floor(T * T))
    top = isqrt(limit)
    n = np.arange(-top, top + 1, dtype=np.int64)
    width = np.array([isqrt(limit - int(k) * int(k)) for k in n], dtype=np.int64)
    residue = (lattice.c * n) % lattice.q
    count = int(np.sum(_class_count(-width, width, residue, lattice.q))) - 1
    return BallCount(T=T, count=count, envelope=T * T / lattice.q + T / shortest)


def shortest_vector_exhaustive(lattice: CongruenceLattice, radius: float) -> Optional[float]:
    """Shortest nonzero vector of norm <= radius by enumeration, or None if there is none."""
    q, c = lattice.q, lattice.c
    best = None
    top = int(np.floor(radius))
    for n in range(-top, top + 1):
        width = isqrt(int(np.floor(radius * radius)) - n * n) if n * n <= radius * radius else -1
        if width < 0:
            continue
        r = c * n % q
        first = -width + (r + width) % q
        for m in range(first, width + 1, q):
            if m == 0 and n == 0:
                continue
            norm = sqrt(m * m + n * n)
            if best is None or norm < best:
                best = norm
    return best


def small_vector_violations(lattice: CongruenceLattice) -> List[Vector]:
    """
    Nonzero (m, n) in Lambda with max(l1 |m|, l2 |n|) < q^(1/d) / 2.

    Empty whenever xi separates +-1, since such a congruence is an integer equality.
    """
    limit = lattice.q ** (1.0 / lattice.d) / 2
    top_m = int(ceil(limit / lattice.l1))
    top_n = int(ceil(limit / lattice.l2))
    found = []
    for n in range(-top_n, top_n + 1):
        if lattice.l2 * abs(n) >= limit:
            continue
        for m in range(-top_m, top_m + 1):
            if (m or n) and lattice.l1 * abs(m) < limit and lattice.contains(m, n):
                found.append((m, n))
    return found


def sublattice_covolume(lattice: CongruenceLattice, d1: int, d2: int) -> int:
    v1, v2 = lattice.sublattice_basis(d1, d2)
    return abs(v1[0] * v2[1] - v1[1] * v2[0])


def _sieve_Y(lattice: CongruenceLattice, M: int, N: int) -> float:
    q = lattice.q
    return 1 + min(min(M, N) + (M + N) / q,
                   (M + N) * (lattice.l1 + lattice.l2) / q ** (1.0 / lattice.d))


def sieve_condition_check(lattice: CongruenceLattice, M: int, N: int,
                          pairs: Optional[Sequence[Tuple[int, int]]] = None,
                          max_product: int = 100) -> SieveCheck:
    """
    Check #{(m, n) in Lambda in the box : d1 | m, d2 | n} = X/(d1 d2) + O(Y).

    X = MN/q and Y = 1 + min(min(M, N) + (M+N)/q, (M+N)(l1+l2)/q^(1/d)).

    Args:
        lattice: Congruence lattice
        M: Box [M, 2M) in m
        N: Box [N, 2N) in n
        pairs: Divisor pairs to test (defaults to all with d1 d2 <= max_product coprime to q)
        max_product: Bound on d1 d2 for the default pairs

    Raises:
        ValidationError: If a given pair is not coprime to q
    """
    if M < 1 or N < 1:
        raise ValidationError(f"Box sides must be at least 1, got M={M}, N={N}")
    q = lattice.q
    if pairs is None:
        pairs = [(d1, d2) for d1 in range(1, max_product + 1) for d2 in range(1, max_product // d1 + 1)
                 if gcd(d1 * d2, q) == 1]
    X = M * N / q
    Y = _sieve_Y(lattice, M, N)
    check = SieveCheck(M=M, N=N, X=X, Y=Y)
    for d1, d2 in pairs:
        _, (b, _) = lattice.sublattice_basis(d1, d2)
        # points are (d1 m', d2 n') with m' = c' n' mod q
        c_prime = b // d1
        count = _rect_count(q, c_prime, -(-M // d1), (2 * M - 1) // d1, -(-N // d2), (2 * N - 1) // d2)
        check.rows.append({"d1": d1, "d2": d2, "count": count, "expected": X / (d1 * d2),
                           "constant": abs(count - X / (d1 * d2)) / Y})
    get_logger().log_stage("sieve_condition", f"q={q}", M=M, N=N, pairs=len(pairs),
                           worst=f"{check.worst:.4g}")
    return check
