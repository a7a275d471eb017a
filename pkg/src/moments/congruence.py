"""
Congruence sums behind the orbit moment.

Expanding L(1/2, f x chi) conj(L(1/2, g x chi)) by the product functional
equation and averaging over the Galois orbit leaves sums over pairs (m, n)
whose residue u = l1 m / (l2 n) mod p^h lies in a class xi (1 + a p^(h-h0)),
xi a (p-1)-st root of unity. Everything here runs over mn <= y_c Q with
Q = q^2 sqrt(R R'), matching lvalue_pair_product.
"""

from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint
from sympy.ntheory import n_order

from .orbit import MomentReport
from ..characters.galois import GaloisAverageContext, galois_average
from ..characters.tables import build_character_table, teichmuller_decompose, wild_characters
from ..lfun.afe import PRODUCT_Y_CUTOFF, product_conductor, product_weight_for
from ..lfun.weights import ProductWeight, product_tail_bound
from ..newforms.table import NewformTable
from ..rankin.main_term import MainTermSpec, main_term
from ..rankin.series import rs_partial, sym2_residue
from ..utils.errors import NumericalContractError, ValidationError
from ..utils.logger import get_logger
from ..utils.summation import ROUNDOFF_FACTOR, compensated_sum


@dataclass(frozen=True)
class CongruenceSumSpec:
    """
    The condition l1 m = xi l2 n mod q with xi^(p-1) = 1 mod q.

    Attributes:
        q: Odd prime power modulus of the congruence
        l1: First twisting integer
        l2: Second twisting integer
        xi: Root of unity modulo q
        conductor: Character modulus whose Q = conductor^2 sqrt(R R') scales the weight
            (defaults to q)
    """
    q: int
    l1: int
    l2: int
    xi: int
    conductor: Optional[int] = None

    def __post_init__(self):
        primes = factorint(self.q)
        if self.q < 3 or len(primes) != 1 or 2 in primes:
            raise ValidationError(f"Congruence modulus must be an odd prime power, got {self.q}")
        if self.l1 < 1 or self.l2 < 1 or gcd(self.l1 * self.l2, self.q) != 1:
            raise ValidationError(f"l1={self.l1}, l2={self.l2} must be positive and coprime to {self.q}")
        if gcd(self.xi, self.q) != 1 or pow(self.xi, self.p - 1, self.q) != 1:
            raise ValidationError(f"xi={self.xi} is not a ({self.p}-1)-st root of unity modulo {self.q}")
        if self.conductor is not None and self.conductor < 1:
            raise ValidationError(f"Conductor must be positive, got {self.conductor}")

    @property
    def p(self) -> int:
        return next(iter(factorint(self.q)))

    @property
    def d(self) -> int:
        """Exact multiplicative order of xi modulo q."""
        return int(n_order(self.xi % self.q, self.q))

    @property
    def is_plus_minus_one(self) -> bool:
        return self.xi % self.q in (1, self.q - 1)

    @property
    def weight_conductor(self) -> int:
        return self.conductor or self.q

    def to_dict(self) -> Dict[str, Any]:
        return {"q": self.q, "l1": self.l1, "l2": self.l2, "xi": self.xi % self.q, "d": self.d,
                "plus_minus_one": self.is_plus_minus_one, "conductor": self.weight_conductor}


@dataclass
class CongruenceSumValue:
    """A congruence sum with its error bound and the number of pairs summed."""
    spec: CongruenceSumSpec
    value: float
    err_estimate: float
    pairs: int
    diagonal_excluded: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"spec": self.spec.to_dict(), "value": self.value, "err_estimate": self.err_estimate,
                "pairs": self.pairs, "diagonal_excluded": self.diagonal_excluded}


@dataclass(frozen=True)
class XiClass:
    """Units u = xi (1 + a p^(h-h0)) mod p^h."""
    xi: int
    a: int
    residue: int


@dataclass
class _PairData:
    a: np.ndarray
    b: np.ndarray
    w: np.ndarray
    M: int
    Q: float
    tail: float
    weight: ProductWeight = field(repr=False)


def _pair_data(f: NewformTable, g: NewformTable, conductor: int, y_cutoff: float,
               weight: Optional[ProductWeight]) -> _PairData:
    if weight is None:
        weight = product_weight_for(f, g, y_cutoff)
    Q = product_conductor(f, g, conductor)
    M = int(np.floor(weight.y_cutoff * Q))
    f.require(M)
    g.require(M)
    n = np.arange(M + 1)
    root_n = np.sqrt(np.maximum(n, 1))
    w = weight(np.maximum(n, 1) / Q)
    w[0] = 0.0
    tail = product_tail_bound(M, Q, weight.spec_f, weight.spec_g)
    return _PairData(a=f.lam[:M + 1] / root_n, b=g.lam[:M + 1] / root_n, w=w, M=M, Q=Q,
                     tail=tail, weight=weight)


def xi_decomposition(p: int, h: int, h0: int = 1) -> List[XiClass]:
    """
    Classes xi (1 + a p^(h-h0)) with xi the Teichmuller lifts of 1..p-1 and 0 <= a < p^h0.

    Exhaustively checks that these are exactly the units u mod p^h with
    <u> = 1 mod p^(h-h0), each reached once.

    Raises:
        ValidationError: If h <= h0
        NumericalContractError: If the classes do not partition that set
    """
    if h <= h0 or h0 < 0:
        raise ValidationError(f"xi decomposition needs h > h0 >= 0, got h={h}, h0={h0}")
    q = p ** h
    step = p ** (h - h0)
    classes = []
    for k in range(1, p):
        xi = teichmuller_decompose(k, p, h)[0]
        for a in range(p ** h0):
            classes.append(XiClass(xi=xi, a=a, residue=xi * (1 + a * step) % q))

    residues = [cls.residue for cls in classes]
    expected = {u for u in range(1, q) if u % p and (teichmuller_decompose(u, p, h)[1] - 1) % step == 0}
    passed = len(set(residues)) == len(residues) and set(residues) == expected
    get_logger().log_contract("xi_decomposition", passed,
                              f"classes={len(classes)}, units={len(expected)}", f"q={q} h0={h0}")
    if not passed:
        raise NumericalContractError("xi_decomposition", f"classes do not partition the units mod {q}")
    return classes


def _inverse_table(q: int, p: int) -> np.ndarray:
    inverse = np.zeros(q, dtype=np.int64)
    for u in range(1, q):
        if u % p:
            inverse[u] = pow(u, -1, q)
    return inverse


def _class_blocks(M: int):
    """Hyperbola split of mn <= M: (m, n-range) rows for m <= r, then (n, m-range) rows with m > r."""
    r = isqrt(M)
    for m in range(1, r + 1):
        yield True, m, 1, M // m
    for n in range(1, r + 1):
        top = M // n
        if top > r:
            yield False, n, r + 1, top


def congruence_sum(spec: CongruenceSumSpec, f: NewformTable, g: NewformTable,
                   exclude_diagonal: bool = False, y_cutoff: float = PRODUCT_Y_CUTOFF,
                   weight: Optional[ProductWeight] = None) -> CongruenceSumValue:
    """
    Sum of lambda_f(m) lambda_g(n) (mn)^(-1/2) W(mn / Q) over l1 m = xi l2 n mod q, (mn, q) = 1.

    For m <= sqrt(M) the partner n runs through its residue class xi^-1 l2^-1 l1 m
    in steps of q; the remaining pairs are enumerated from n the same way.

    Args:
        spec: Congruence data
        f: First form
        g: Second form
        exclude_diagonal: Drop the pairs with l1 m = l2 n
        y_cutoff: Weight cutoff when no weight is given
        weight: Prebuilt product weight for (f, g)

    Raises:
        InsufficientCoefficientsError: If a table is shorter than y_c Q
    """
    data = _pair_data(f, g, spec.weight_conductor, y_cutoff, weight)
    q, p, l1, l2 = spec.q, spec.p, spec.l1, spec.l2
    to_n = pow(spec.xi * l2, -1, q) * l1 % q
    to_m = spec.xi * l2 * pow(l1, -1, q) % q

    parts = []
    mass = []
    pairs = 0
    for outer_is_m, outer, start, stop in _class_blocks(data.M):
        if outer % p == 0 or stop < start:
            continue
        residue = (to_n if outer_is_m else to_m) * outer % q
        first = start + (residue - start) % q
        inner = np.arange(first, stop + 1, q)
        if inner.size == 0:
            continue
        if outer_is_m:
            m, n = np.full(inner.size, outer), inner
        else:
            m, n = inner, np.full(inner.size, outer)
        terms = data.a[m] * data.b[n] * data.w[m * n]
        if exclude_diagonal:
            terms = np.where(l1 * m == l2 * n, 0.0, terms)
        parts.append(compensated_sum(terms))
        mass.append(float(np.sum(np.abs(terms))))
        pairs += inner.size

    value = float(compensated_sum(np.array(parts))) if parts else 0.0
    err = data.tail + ROUNDOFF_FACTOR * float(np.sum(mass))
    get_logger().log_stage("congruence_sum", f"{f.label}x{g.label} mod {q}", xi=spec.xi % q,
                           pairs=pairs, value=f"{value:.10g}")
    return CongruenceSumValue(spec=spec, value=value, err_estimate=err, pairs=pairs,
                              diagonal_excluded=exclude_diagonal)


def diagonal_sum(f: NewformTable, g: NewformTable, p: int, conductor: int, l1: int = 1, l2: int = 1,
                 y_cutoff: float = PRODUCT_Y_CUTOFF, weight: Optional[ProductWeight] = None) -> float:
    """
    (l1 l2)^(1/2) times the pairs with l1 m = l2 n:
    sum over (k, p) = 1 of lambda_f(l2 k) lambda_g(l1 k) / k W(l1 l2 k^2 / Q).
    """
    data = _pair_data(f, g, conductor, y_cutoff, weight)
    k = np.arange(1, isqrt(data.M // (l1 * l2)) + 1)
    k = k[k % p != 0]
    terms = np.sqrt(l1 * l2) * data.a[l2 * k] * data.b[l1 * k] * data.w[l1 * l2 * k * k]
    return float(compensated_sum(terms))


def class_totals(f: NewformTable, g: NewformTable, p: int, h: int, l1: int = 1, l2: int = 1,
                 y_cutoff: float = PRODUCT_Y_CUTOFF,
                 weight: Optional[ProductWeight] = None) -> Tuple[np.ndarray, float, _PairData]:
    """
    Pair sums binned by u = l1 m / (l2 n) mod p^h over (mn, p) = 1.

    Returns:
        (totals indexed by u, absolute mass, pair data)
    """
    q = p ** h
    data = _pair_data(f, g, q, y_cutoff, weight)
    inverse = _inverse_table(q, p)
    totals = np.zeros(q)
    mass = 0.0
    for outer_is_m, outer, start, stop in _class_blocks(data.M):
        if outer % p == 0 or stop < start:
            continue
        inner = np.arange(start, stop + 1)
        inner = inner[inner % p != 0]
        if outer_is_m:
            m, n = np.full(inner.size, outer), inner
        else:
            m, n = inner, np.full(inner.size, outer)
        terms = data.a[m] * data.b[n] * data.w[m * n]
        u = (l1 * m % q) * inverse[l2 * n % q] % q
        totals += np.bincount(u, weights=terms, minlength=q)
        mass += float(np.sum(np.abs(terms)))
    return totals, mass, data


def moment_by_congruence(f: NewformTable, g: NewformTable, p: int, h: int, l1: int = 1, l2: int = 1,
                         ctx: Optional[GaloisAverageContext] = None,
                         y_cutoff: float = PRODUCT_Y_CUTOFF) -> MomentReport:
    """
    The orbit moment rebuilt from congruence classes.

    The product functional equation gives two pair sums per character; their
    Galois averages are weighted by the average of chi^sigma over each class
    xi (1 + a p^(h-h0)) and vanish off those classes.

    Returns:
        MomentReport with method congruence_route; components list every class,
        the diagonal (l1 m = l2 n) and the off-diagonal remainder
    """
    spec = MainTermSpec(f, g, p, h, l1, l2)
    if ctx is None:
        ctx = GaloisAverageContext.rational(p)
    q = spec.q
    context = f"{f.label}x{g.label} q={q}"

    table = build_character_table(p, h)
    chi = wild_characters(table)[0]
    classes = xi_decomposition(p, h, ctx.h0)
    coefficient = {cls.residue: complex(galois_average(chi, cls.residue, ctx).embed()) for cls in classes}

    totals, mass, data = class_totals(f, g, p, h, l1, l2, y_cutoff)
    twist = f.R * pow(g.R, -1, q) * l1 * l1 * pow(l2 * l2, -1, q) % q
    inverse = _inverse_table(q, p)
    eps = f.eps_f * g.eps_f

    rows = []
    first = 0j
    second = 0j
    for u in range(1, q):
        if u % p == 0 or totals[u] == 0.0:
            continue
        c1 = coefficient.get(u, 0j)
        c2 = coefficient.get(twist * inverse[u] % q, 0j)
        first += c1 * totals[u]
        second += eps * c2 * totals[u]
    for cls in classes:
        rows.append({"xi": cls.xi, "a": cls.a, "residue": cls.residue,
                     "coefficient": coefficient[cls.residue].real, "total": float(totals[cls.residue])})

    scale = np.sqrt(l1 * l2)
    value = complex(scale * (first + second))
    # The first pair sum peaks on l1 m = l2 n, the conjugated one on l2 m = l1 n
    diagonal = diagonal_sum(f, g, p, q, l1, l2, weight=data.weight)
    mirror = diagonal_sum(f, g, p, q, l2, l1, weight=data.weight) if f.R == g.R else 0.0
    diagonal_total = diagonal + eps * mirror
    err = float(scale * 2 * (data.tail + ROUNDOFF_FACTOR * mass))

    mt = main_term(spec)
    get_logger().log_stage("moment_by_congruence", context, value=f"{value.real:.10g}",
                           diagonal=f"{diagonal_total:.10g}", classes=len(classes))
    return MomentReport(f=f.label, g=g.label, p=p, h=h, l1=l1, l2=l2, empirical=value,
                        err_estimate=err, mt=mt.value(), orbit_size=len(ctx.subgroup(h)),
                        method="congruence_route",
                        components={"classes": rows, "diagonal": float(diagonal_total),
                                    "off_diagonal": float(value.real - diagonal_total),
                                    "y_cutoff": data.weight.y_cutoff, "Q": data.Q,
                                    "main_term": mt.to_dict()})


def error_term_profile(f: NewformTable, g: NewformTable, p: int, h_values: Sequence[int],
                       l1: int = 1, l2: int = 1, h0: int = 1,
                       y_cutoff: float = PRODUCT_Y_CUTOFF,
                       mt_constant: Optional[float] = None) -> Dict[str, Any]:
    """
    |ET(f, g; p^(h-h0), l1, xi l2)| relative to the main term MT(f, g; p^h, l1, l2), per xi and h.

    ET drops the pairs l1 m = l2 n; the weight uses the character modulus p^h and
    the ratio carries the factor (l1 l2)^(1/2) of the moment. For f = g the MT
    constant is FITTED: taken from mt_constant when given, otherwise the least-squares
    constant of the diagonal totals against the assembled slope over h_values.

    Returns:
        Dictionary with one row per (h, xi), the main term per h and, per xi,
        whether |ET|/MT decreases in h
    """
    h_values = sorted(set(int(h) for h in h_values))
    if not h_values:
        raise ValidationError("--h range must not be empty")
    for h in h_values:
        if h <= h0:
            raise ValidationError(f"--h values must exceed h0={h0}, got {h}")

    base = MainTermSpec(f, g, p, h_values[0], l1, l2)
    rs_residue = sym2_residue(f).rs_residue if base.diagonal else None
    rs_value = None if base.diagonal else rs_partial(f, g, 1.0).value
    weight = product_weight_for(f, g, y_cutoff)
    eps = f.eps_f * g.eps_f

    diagonals = {}
    for h in h_values:
        diagonal = diagonal_sum(f, g, p, p ** h, l1, l2, weight=weight)
        mirror = diagonal_sum(f, g, p, p ** h, l2, l1, weight=weight) if f.R == g.R else 0.0
        diagonals[h] = diagonal + eps * mirror

    terms = {h: main_term(MainTermSpec(f, g, p, h, l1, l2), rs_residue=rs_residue, rs_value=rs_value)
             for h in h_values}
    if base.diagonal:
        if mt_constant is None:
            mt_constant = float(np.mean([diagonals[h] - terms[h].value() for h in h_values]))
        terms = {h: mt.with_constant(mt_constant) for h, mt in terms.items()}

    scale = np.sqrt(l1 * l2)
    rows = []
    for h in h_values:
        mt = terms[h].value()
        for k in range(1, p):
            xi = teichmuller_decompose(k, p, h - h0)[0]
            spec = CongruenceSumSpec(q=p ** (h - h0), l1=l1, l2=l2, xi=xi, conductor=p ** h)
            result = congruence_sum(spec, f, g, exclude_diagonal=True, weight=weight)
            ratio = float(scale * abs(result.value) / abs(mt)) if mt else None
            rows.append({"h": h, "xi": xi, "d": spec.d, "plus_minus_one": spec.is_plus_minus_one,
                         "et": result.value, "err_estimate": result.err_estimate,
                         "mt": mt, "diagonal": diagonals[h], "ratio": ratio})

    trends = {}
    for k in range(1, p):
        series = [row for row in rows if row["xi"] % p == k]
        ratios = [row["ratio"] for row in series if row["ratio"] is not None]
        trends[str(k)] = {"d": series[-1]["d"] if series else None,
                          "decreasing": all(b <= a for a, b in zip(ratios, ratios[1:]))}
    get_logger().log_stage("error_term_profile", f"{f.label}x{g.label} p={p}", rows=len(rows),
                           mt_constant=mt_constant)
    return {"f": f.label, "g": g.label, "p": p, "l1": l1, "l2": l2, "h0": h0, "rows": rows,
            "main_terms": [terms[h].to_dict() for h in h_values],
            "mt_constant_fitted": base.diagonal, "trend_by_xi_mod_p": trends}
