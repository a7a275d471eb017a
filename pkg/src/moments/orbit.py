"""
Galois-orbit moments of twisted central values and trace sums.

For a wild character chi mod q = p^h and a base field context F the moment is

    (l1 l2)^(1/2) / [F(chi):F] * sum over sigma of
        L(1/2, f x chi^sigma) conj(L(1/2, g x chi^sigma)) chi^sigma(l1 / l2),

evaluated from single-twist functional equations for every conjugate.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..characters.galois import GaloisAverageContext
from ..characters.tables import (
    CharacterTable,
    DirichletCharacter,
    build_character_table,
    evaluate_complex,
    gauss_sum,
    wild_characters,
)
from ..lfun.afe import lvalue_single, orbit_lvalues
from ..newforms.statistics import lf_prime_set
from ..newforms.table import NewformTable
from ..rankin.main_term import MainTermResult, MainTermSpec, main_term
from ..rankin.series import rs_partial, sym2_residue
from ..utils.errors import NumericalContractError, ValidationError
from ..utils.logger import get_logger
from ..utils.parallel import ordered_map

# Reference L-value must exceed its error bound by this factor to normalize by it
PROXY_MARGIN = 10.0


@dataclass
class MomentReport:
    """Empirical orbit moment at one modulus against the analytic main term."""
    f: str
    g: str
    p: int
    h: int
    l1: int
    l2: int
    empirical: complex
    err_estimate: float
    mt: Optional[float]
    orbit_size: int
    method: str = "orbit_single_afe"
    components: Dict[str, Any] = field(default_factory=dict)

    @property
    def q(self) -> int:
        return self.p ** self.h

    @property
    def log_q(self) -> float:
        return float(np.log(self.q))

    @property
    def discrepancy(self) -> Optional[float]:
        """Real part of empirical minus MT."""
        if self.mt is None:
            return None
        return self.empirical.real - self.mt

    def to_dict(self) -> Dict[str, Any]:
        return {"f": self.f, "g": self.g, "p": self.p, "h": self.h, "q": self.q,
                "l1": self.l1, "l2": self.l2, "method": self.method,
                "empirical": {"re": self.empirical.real, "im": self.empirical.imag},
                "err_estimate": self.err_estimate, "mt": self.mt,
                "discrepancy": self.discrepancy, "orbit_size": self.orbit_size,
                "components": self.components}


@dataclass
class MomentSeries:
    """Orbit moments over a range of h with a degree-one fit in log q."""
    reports: List[MomentReport]
    regression: Dict[str, Any]
    main_terms: List[MainTermResult]

    def to_dict(self) -> Dict[str, Any]:
        return {"reports": [report.to_dict() for report in self.reports],
                "regression": self.regression,
                "main_terms": [mt.to_dict() for mt in self.main_terms]}


@dataclass
class ProxyPeriod:
    """Omega = |G(conj chi_ref) L(1/2, f x chi_ref)|^2 for a fixed reference character."""
    value: float
    err_estimate: float
    reference_modulus: int
    reference_index: int
    definition: str = "|G(conj chi_ref) L(1/2, f x chi_ref)|^2"

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value, "err_estimate": self.err_estimate,
                "reference_modulus": self.reference_modulus,
                "reference_index": self.reference_index, "definition": self.definition}


@dataclass
class TraceReport:
    """A trace sum over a Galois orbit, with and without the factor p^h of the normalization."""
    f: str
    p: int
    h: int
    ell: int
    t: int
    c: float
    value: complex
    err_estimate: float
    prediction: Optional[float]
    omega: ProxyPeriod
    orbit_size: int
    components: Dict[str, Any] = field(default_factory=dict)
    constant_fitted: bool = False

    @property
    def reduced(self) -> complex:
        """Trace divided by p^h, the quantity compared to c MT / Omega."""
        return self.value / self.p ** self.h

    @property
    def nonzero(self) -> bool:
        return abs(self.value) > 5 * self.err_estimate

    def to_dict(self) -> Dict[str, Any]:
        return {"f": self.f, "p": self.p, "h": self.h, "q": self.p ** self.h,
                "ell": self.ell, "t": self.t, "c": self.c,
                "value": {"re": self.value.real, "im": self.value.imag},
                "reduced": {"re": self.reduced.real, "im": self.reduced.imag},
                "err_estimate": self.err_estimate, "prediction": self.prediction,
                "constant_fitted": self.constant_fitted, "nonzero": self.nonzero,
                "omega": self.omega.to_dict(),
                "orbit_size": self.orbit_size, "components": self.components}


def orbit_characters(table: CharacterTable, ctx: GaloisAverageContext) -> List[DirichletCharacter]:
    """Conjugates chi^a of the first wild character over Gal(F(chi)/F), ascending in a."""
    if ctx.p != table.p:
        raise ValidationError(f"Base field context is for p={ctx.p}, table is modulo {table.q}")
    if table.h <= ctx.h0:
        raise ValidationError(f"Orbit moments need h > h0, got h={table.h}, h0={ctx.h0}")
    base = wild_characters(table)[0]
    return [base.power(a) for a in ctx.subgroup(table.h)]


def _orbit_values(forms: Sequence[NewformTable], table: CharacterTable,
                  characters: Sequence[DirichletCharacter], split: float,
                  cutoff_multiplier: float, threads: Optional[int]):
    return ordered_map(lambda form: orbit_lvalues(form, table, characters, split, cutoff_multiplier),
                       forms, threads=threads, chunk_size=1)


def orbit_moment(f: NewformTable, g: NewformTable, p: int, h: int, l1: int = 1, l2: int = 1,
                 ctx: Optional[GaloisAverageContext] = None, split: float = 1.0,
                 cutoff_multiplier: float = 1.0, rs_residue: Optional[float] = None,
                 rs_value: Optional[complex] = None, with_main_term: bool = True,
                 threads: Optional[int] = None) -> MomentReport:
    """
    Twisted second moment over the Galois orbit of the wild characters mod p^h.

    Args:
        f: First form
        g: Second form
        p: Odd prime not dividing the levels
        h: Conductor exponent >= 2
        l1: First twisting integer
        l2: Second twisting integer, coprime to l1
        ctx: Base field F (defaults to Q)
        split: AFE split passed to every single-twist evaluation
        cutoff_multiplier: Scales the AFE truncation points
        rs_residue: Naive Rankin-Selberg residue of f (f = g), reused across h
        rs_value: L(1, f x g) from the naive series (f != g), reused across h
        with_main_term: Attach the analytic main term
        threads: Worker count for the per-form evaluations

    Returns:
        MomentReport with the empirical value and MT
    """
    spec = MainTermSpec(f, g, p, h, l1, l2)
    if ctx is None:
        ctx = GaloisAverageContext.rational(p)
    context = f"{f.label}x{g.label} q={spec.q}"
    logger = get_logger()

    table = build_character_table(p, h)
    characters = orbit_characters(table, ctx)
    logger.log_stage("orbit_moment", context, orbit=len(characters), l1=l1, l2=l2, h0=ctx.h0)

    if spec.diagonal:
        values_f = _orbit_values([f], table, characters, split, cutoff_multiplier, threads)[0]
        values_g = values_f
    else:
        values_f, values_g = _orbit_values([f, g], table, characters, split, cutoff_multiplier, threads)

    ratio = l1 * pow(l2, -1, spec.q) % spec.q
    weights = np.array([evaluate_complex(chi, ratio) for chi in characters])
    lf = np.array([record.value for record in values_f])
    lg = np.array([record.value for record in values_g])
    ef = np.array([record.err_estimate for record in values_f])
    eg = np.array([record.err_estimate for record in values_g])

    scale = np.sqrt(l1 * l2) / len(characters)
    # Orbit members are summed in ascending Galois exponent
    empirical = complex(scale * np.sum(lf * np.conj(lg) * weights))
    err = float(scale * np.sum(np.abs(lf) * eg + np.abs(lg) * ef + ef * eg))

    mt_value = None
    components: Dict[str, Any] = {"field": ctx.kind, "h0": ctx.h0}
    if with_main_term:
        result = main_term(spec, rs_residue=rs_residue, rs_value=rs_value)
        mt_value = result.value()
        components["main_term"] = result.to_dict()

    logger.log_stage("orbit_moment_done", context, empirical=f"{empirical.real:.10g}",
                     imag=f"{empirical.imag:.2e}", err=f"{err:.2e}", mt=mt_value)
    return MomentReport(f=f.label, g=g.label, p=p, h=h, l1=l1, l2=l2, empirical=empirical,
                        err_estimate=err, mt=mt_value, orbit_size=len(characters),
                        components=components)


def moment_series(f: NewformTable, g: NewformTable, p: int, h_values: Sequence[int],
                  l1: int = 1, l2: int = 1, ctx: Optional[GaloisAverageContext] = None,
                  split: float = 1.0, cutoff_multiplier: float = 1.0,
                  threads: Optional[int] = None) -> MomentSeries:
    """
    Orbit moments over h_values with a least-squares line in log q.

    For f = g the intercept is the FITTED constant of the main term and the
    slope is compared to the assembled MT slope.

    Raises:
        ValidationError: If fewer than two distinct h are given
    """
    h_values = sorted(set(int(h) for h in h_values))
    if len(h_values) < 2:
        raise ValidationError(f"--h range needs at least two values, got {h_values}")

    diagonal = MainTermSpec(f, g, p, h_values[0], l1, l2).diagonal
    rs_residue = sym2_residue(f).rs_residue if diagonal else None
    rs_value = None if diagonal else rs_partial(f, g, 1.0).value

    reports = [orbit_moment(f, g, p, h, l1, l2, ctx, split, cutoff_multiplier,
                            rs_residue=rs_residue, rs_value=rs_value, threads=threads)
               for h in h_values]

    log_q = np.array([report.log_q for report in reports])
    empirical = np.array([report.empirical.real for report in reports])
    slope, intercept = np.polyfit(log_q, empirical, 1)
    residuals = empirical - (slope * log_q + intercept)

    spec = MainTermSpec(f, g, p, h_values[-1], l1, l2)
    base = main_term(spec, rs_residue=rs_residue, rs_value=rs_value)
    expected = base.slope
    regression: Dict[str, Any] = {
        "h_values": h_values,
        "slope": float(slope),
        "intercept": float(intercept),
        "intercept_provenance": "FITTED",
        "expected_slope": expected,
        "residuals": [float(r) for r in residuals],
        "max_residual_ratio": float(np.max(np.abs(residuals)) / abs(empirical[-1]))
        if empirical[-1] else None,
    }
    if diagonal and expected:
        regression["relative_slope_error"] = float(abs(slope - expected) / abs(expected))

    main_terms = []
    for report in reports:
        mt = main_term(MainTermSpec(f, g, p, report.h, l1, l2), rs_residue=rs_residue, rs_value=rs_value)
        if diagonal:
            mt = mt.with_constant(float(intercept))
            report.mt = mt.value()
        main_terms.append(mt)

    get_logger().log_stage("moment_series", f"{f.label}x{g.label} p={p}", slope=f"{slope:.6g}",
                           expected=f"{expected:.6g}", intercept=f"{intercept:.6g}")
    return MomentSeries(reports=reports, regression=regression, main_terms=main_terms)


def proxy_period(f: NewformTable, reference: Optional[DirichletCharacter] = None,
                 split: float = 1.0, cutoff_multiplier: float = 1.0) -> ProxyPeriod:
    """
    Normalizing period |G(conj chi_ref) L(1/2, f x chi_ref)|^2.

    Args:
        f: Rational newform
        reference: Reference character (defaults to the trivial character)

    Raises:
        NumericalContractError: If the reference value is not clearly nonzero
    """
    if reference is None:
        reference = CharacterTable.trivial().character(0)
    record = lvalue_single(f, reference, split, cutoff_multiplier)
    gauss = gauss_sum(reference.conjugate())
    magnitude = abs(record.value)
    passed = magnitude > PROXY_MARGIN * record.err_estimate
    get_logger().log_contract("period_proxy_nonzero", passed,
                              f"|L|={magnitude:.6g}, err={record.err_estimate:.2e}", f.label)
    if not passed:
        raise NumericalContractError("period_proxy_nonzero",
                                     f"{f.label}: reference L-value {magnitude:.3e} "
                                     f"within {PROXY_MARGIN:g}x its error {record.err_estimate:.3e}")
    scale = abs(gauss) ** 2
    value = scale * magnitude ** 2
    err = scale * (2 * magnitude * record.err_estimate + record.err_estimate ** 2)
    return ProxyPeriod(value=float(value), err_estimate=float(err),
                       reference_modulus=reference.modulus, reference_index=reference.j)


def trace_exponent_bound(embeddings: int = 1) -> int:
    """T_F = 2 max(2, #embeddings of F)."""
    return 2 * max(2, embeddings)


def trace_sum(f: NewformTable, p: int, h: int, ell: int, t: int = 1, c: float = 1.0,
              ctx: Optional[GaloisAverageContext] = None, omega: Optional[ProxyPeriod] = None,
              split: float = 1.0, cutoff_multiplier: float = 1.0,
              rs_residue: Optional[float] = None,
              mt_constant: Optional[float] = None) -> TraceReport:
    """
    ell^(t/2) / [F(chi):F0] Tr(c |L_f(chi)|^2 chi(ell^t)) for a rational form.

    |L_f(chi)|^2 is normalized as p^h |L(1/2, f x chi)|^2 / Omega with the
    proxy period Omega.

    Args:
        f: Rational newform
        p: Odd prime
        h: Conductor exponent >= 2
        ell: Prime in the admissible set for (f, p)
        t: Exponent with 1 <= t <= T_F
        c: Nonzero rational weight
        ctx: Base field F0 (defaults to Q)
        omega: Precomputed proxy period
        mt_constant: Fitted constant term of MT(f, f; p^h, ell^t, 1). Without it the
            prediction c MT / Omega is left as None, since MT is known only up to this term

    Raises:
        ValidationError: If ell is not admissible or t is out of range
    """
    limit = trace_exponent_bound()
    if not 1 <= t <= limit:
        raise ValidationError(f"--t must lie in [1, {limit}], got {t}")
    if c == 0:
        raise ValidationError("--c must be nonzero")
    if ell not in lf_prime_set(f, p, ell):
        raise ValidationError(f"--ell={ell} is not an admissible prime for {f.label} at p={p}")
    if ctx is None:
        ctx = GaloisAverageContext.rational(p)
    if omega is None:
        omega = proxy_period(f, split=split, cutoff_multiplier=cutoff_multiplier)

    q = p ** h
    table = build_character_table(p, h)
    characters = orbit_characters(table, ctx)
    records = orbit_lvalues(f, table, characters, split, cutoff_multiplier)
    values = np.array([record.value for record in records])
    errors = np.array([record.err_estimate for record in records])
    twist = np.array([evaluate_complex(chi, ell ** t % q) for chi in characters])

    normalized = q * np.abs(values) ** 2 / omega.value
    scale = ell ** (t / 2) / len(characters)
    value = complex(scale * c * np.sum(normalized * twist))
    value_err = q * (2 * np.abs(values) * errors + errors ** 2) / omega.value
    err = float(scale * abs(c) * (np.sum(value_err) + np.sum(normalized) * omega.err_estimate / omega.value))

    spec = MainTermSpec(f, f, p, h, l1=ell ** t, l2=1)
    mt = main_term(spec, rs_residue=rs_residue)
    if mt_constant is not None:
        mt = mt.with_constant(float(mt_constant))
        prediction: Optional[float] = float(c * mt.value() / omega.value)
    else:
        prediction = None

    get_logger().log_stage("trace_sum", f"{f.label} q={q}", ell=ell, t=t,
                           value=f"{value.real:.10g}", imag=f"{value.imag:.2e}", err=f"{err:.2e}")
    return TraceReport(f=f.label, p=p, h=h, ell=ell, t=t, c=c, value=value, err_estimate=err,
                       prediction=prediction, omega=omega, orbit_size=len(characters),
                       components={"main_term": mt.to_dict()},
                       constant_fitted=mt_constant is not None)
