"""
Main application for the WildTwist laboratory.

This module wires configuration, logging, the coefficient cache and the
report writer around the numerical subcommands.
"""

import argparse
import re
import sys
from dataclasses import asdict
from typing import Any, Dict, List, Optional, Tuple

import mpmath

from .characters import build_character_table, gauss_sums_all, teichmuller_decompose, wild_characters
from .config.config_manager import DEFAULT_CONFIG_PATH, ConfigManager, RunConfig
from .lattice_sieve import (
    CongruenceLattice,
    box_count_samples,
    gauss_reduce,
    sieve_condition_check,
    small_vector_violations,
    weil_bound_exhaustive,
)
from .lfun import orbit_lvalues
from .moments import (
    error_term_profile,
    moment_by_congruence,
    moment_series,
    orbit_moment,
    proxy_period,
    trace_sum,
)
from .newforms import NewformTable, lf_prime_set, satotate_pair_sum, satotate_sum
from .recognize import certify_generation, rationality_check, recognize_real_cyclotomic
from .reports import FORMATS, ReportWriter
from .storage import CoefficientCache, QExpansionFetcher, resolve_form
from .utils.errors import NumericalContractError, ValidationError
from .utils.logger import initialize_logger
from .utils.parallel import configure_threads, worker_count
from .verification import SelfTestSuite

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONTRACT = 2

SELFTEST_N = 20000

Result = Tuple[Dict[str, Any], Any]


def parse_h_range(text: str, flag: str = "--h") -> List[int]:
    """
    Parse an exponent list: "4", "2..6" (inclusive) or "3,5,6".

    Raises:
        ValidationError: Naming the flag on malformed input
    """
    text = str(text).strip()
    match = re.fullmatch(r"(\d+)\.\.(\d+)", text)
    if match:
        lo, hi = int(match.group(1)), int(match.group(2))
        if lo > hi:
            raise ValidationError(f"{flag} range '{text}' is empty")
        return list(range(lo, hi + 1))
    if re.fullmatch(r"\d+(,\d+)*", text):
        return [int(part) for part in text.split(",")]
    raise ValidationError(f"{flag} must look like 4, 2..6 or 3,5,6; got '{text}'")


class WildTwistApplication:
    """Runs one subcommand under a loaded configuration."""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize the WildTwist application.

        Args:
            config_path: Path to the configuration file; None uses the
                default path and tolerates its absence
        """
        self.config_required = config_path is not None
        self.config_manager = ConfigManager(config_path or DEFAULT_CONFIG_PATH)
        self.config: Optional[RunConfig] = None
        self.logger = None
        self.cache: Optional[CoefficientCache] = None
        self.writer: Optional[ReportWriter] = None
        self._fetched: Optional[NewformTable] = None

    def initialize(self, args: argparse.Namespace) -> None:
        """
        Load configuration, apply flag overrides and set up shared components.

        Raises:
            FileNotFoundError: If an explicit config file is missing
            ValueError: If the configuration or a flag is invalid
        """
        config = self.config_manager.load_config(required=self.config_required)
        overrides = {
            "threads": args.threads, "seed": args.seed, "output_format": args.format,
            "output_path": args.output, "cache_dir": args.cache_dir, "fetch_url": args.fetch_url,
            "log_level": args.log_level, "log_file": args.log_file,
        }
        for key, value in overrides.items():
            if value is not None:
                setattr(config, key, value)
        self.config_manager._validate_config(config)
        self.config = config

        self.logger = initialize_logger(log_file=config.log_file, log_level=config.log_level)
        configure_threads(config.threads)
        self.cache = CoefficientCache(config.cache_dir)
        self.writer = ReportWriter(config.output_format, config.output_path)
        self.logger.log_startup(args.subcommand, worker_count())

    def _coefficient_bound(self, args: argparse.Namespace) -> int:
        N = getattr(args, "N", None)
        return N if N is not None else self.config.forms[0].N

    def load_form(self, source: Optional[str], N: int) -> NewformTable:
        """
        Table for a form flag; the downloaded table stands in for --form when
        --fetch-url is set.
        """
        if source is None:
            source = self.config.forms[0].source
        if self.config.fetch_url and source == self.config.forms[0].source:
            if self._fetched is None:
                fetcher = QExpansionFetcher()
                try:
                    self._fetched = fetcher.fetch(self.config.fetch_url)
                finally:
                    fetcher.close()
            self._fetched.require(N)
            return self._fetched if self._fetched.N == N else self._fetched.truncated(N)
        return resolve_form(source, N, self.cache)

    def _forms(self, args: argparse.Namespace) -> Tuple[NewformTable, NewformTable]:
        N = self._coefficient_bound(args)
        f = self.load_form(args.form, N)
        g = f if args.form2 is None or args.form2 == args.form else self.load_form(args.form2, N)
        return f, g

    def _h_values(self, args: argparse.Namespace) -> List[int]:
        if args.h is None:
            return list(self.config.moment.h_values)
        return parse_h_range(args.h)

    def _p(self, args: argparse.Namespace) -> int:
        return args.p if args.p is not None else self.config.moment.p

    def run_characters(self, args: argparse.Namespace) -> Result:
        p = self._p(args)
        h = parse_h_range(args.h)[0] if args.h else 2
        table = build_character_table(p, h)
        characters = wild_characters(table) if args.list_wild else [table.character(j) for j in range(table.phi)]
        gauss = gauss_sums_all(table)
        rows = [{"j": chi.j, "order": chi.order, "even": chi.is_even, "primitive": chi.is_primitive,
                 "wild": chi.is_wild, "gauss_modulus_ratio": abs(gauss[chi.j]) / table.q ** 0.5}
                for chi in characters]
        result = {"q": table.q, "phi": table.phi, "primitive_root": table.g,
                  "wild_indices": [chi.j for chi in characters if chi.is_wild], "rows": rows}
        return {"p": p, "h": h, "list_wild": args.list_wild}, result

    def run_lvalue(self, args: argparse.Namespace) -> Result:
        h_values = self._h_values(args)
        p = self._p(args)
        f, _ = self._forms(args)
        cutoffs = self.config.cutoffs
        rows = []
        for h in h_values:
            table = build_character_table(p, h)
            records = orbit_lvalues(f, table, split=cutoffs.split, cutoff_multiplier=cutoffs.afe_multiplier)
            rows.extend({"h": h, **record.to_dict()} for record in records)
        parameters = {"form": f.label, "N": f.N, "p": p, "h": h_values,
                      "split": cutoffs.split, "afe_multiplier": cutoffs.afe_multiplier}
        return parameters, {"rows": rows}

    def run_moment(self, args: argparse.Namespace) -> Result:
        f, g = self._forms(args)
        p = self._p(args)
        h_values = self._h_values(args)
        l1 = args.l1 if args.l1 is not None else self.config.moment.l1
        l2 = args.l2 if args.l2 is not None else self.config.moment.l2
        cutoffs = self.config.cutoffs
        parameters = {"f": f.label, "g": g.label, "N": f.N, "p": p, "h": h_values, "l1": l1, "l2": l2,
                      "method": args.method, "split": cutoffs.split,
                      "afe_multiplier": cutoffs.afe_multiplier, "y_cutoff": cutoffs.y_cutoff}

        if args.method == "congruence":
            rows = [moment_by_congruence(f, g, p, h, l1, l2, y_cutoff=cutoffs.y_cutoff).to_dict()
                    for h in h_values]
            return parameters, {"rows": rows}
        if len(h_values) == 1:
            report = orbit_moment(f, g, p, h_values[0], l1, l2, split=cutoffs.split,
                                  cutoff_multiplier=cutoffs.afe_multiplier)
            return parameters, {"rows": [report.to_dict()]}
        series = moment_series(f, g, p, h_values, l1, l2, split=cutoffs.split,
                               cutoff_multiplier=cutoffs.afe_multiplier).to_dict()
        return parameters, {"rows": series["reports"], "regression": series["regression"],
                            "main_terms": series["main_terms"]}

    def run_trace(self, args: argparse.Namespace) -> Result:
        f, _ = self._forms(args)
        p = self._p(args)
        moment = self.config.moment
        ell = args.ell if args.ell is not None else moment.ell
        t = args.t if args.t is not None else moment.t
        c = args.c if args.c is not None else moment.c
        h_values = self._h_values(args)
        cutoffs = self.config.cutoffs

        omega = proxy_period(f, split=cutoffs.split, cutoff_multiplier=cutoffs.afe_multiplier)
        reports = [trace_sum(f, p, h, ell, t, c, omega=omega, split=cutoffs.split,
                             cutoff_multiplier=cutoffs.afe_multiplier) for h in h_values]
        values = [report.value.real for report in reports]
        result = {
            "rows": [report.to_dict() for report in reports],
            "all_real": all(abs(r.value.imag) <= 1e-6 * max(abs(r.value), 1e-300) for r in reports),
            "all_nonzero": all(report.nonzero for report in reports),
            "monotone_in_log_q": all(b > a for a, b in zip(values, values[1:])),
        }
        parameters = {"form": f.label, "N": f.N, "p": p, "h": h_values, "ell": ell, "t": t, "c": c}
        return parameters, result

    def run_errorterm(self, args: argparse.Namespace) -> Result:
        f, g = self._forms(args)
        p = self._p(args)
        moment = self.config.moment
        l1 = args.l1 if args.l1 is not None else moment.l1
        l2 = args.l2 if args.l2 is not None else moment.l2
        h0 = args.h0 if args.h0 is not None else moment.h0
        h_values = self._h_values(args)
        y_cutoff = self.config.cutoffs.y_cutoff
        result = error_term_profile(f, g, p, h_values, l1, l2, h0, y_cutoff=y_cutoff)
        parameters = {"f": f.label, "g": g.label, "N": f.N, "p": p, "h": h_values, "l1": l1, "l2": l2,
                      "h0": h0, "y_cutoff": y_cutoff}
        return parameters, result

    def run_lattice(self, args: argparse.Namespace) -> Result:
        settings = self.config.lattice
        p = args.p if args.p is not None else settings.p
        h = parse_h_range(args.h)[0] if args.h else settings.h
        l1 = args.l1 if args.l1 is not None else 1
        l2 = args.l2 if args.l2 is not None else 1
        samples = args.samples if args.samples is not None else settings.samples
        max_side = args.max_side if args.max_side is not None else settings.max_side
        q = p ** h
        xi = args.xi if args.xi is not None else teichmuller_decompose(2, p, h)[0]

        lattice = CongruenceLattice(q=q, l1=l1, l2=l2, xi=xi)
        reduced = gauss_reduce(lattice)
        violations = small_vector_violations(lattice)
        boxes = box_count_samples(lattice, samples, max_side, seed=self.config.seed)
        sieve = sieve_condition_check(lattice, max_side, max_side)
        weil = weil_bound_exhaustive(p, min(q, 343)) if p < 11 else {}
        result = {
            "lattice": lattice.to_dict(),
            "reduced_basis": reduced.to_dict(),
            "shortest_vector_violations": [list(v) for v in violations],
            "box_count": {"max_ratio": boxes["max_ratio"], "seed": boxes["seed"]},
            "rows": boxes["samples"],
            "sieve": sieve.to_dict(),
            "weil_max_ratio_by_modulus": {str(r): ratio for r, ratio in weil.items()},
            "exact": True,
        }
        parameters = {"p": p, "h": h, "q": q, "l1": l1, "l2": l2, "xi": xi, "samples": samples,
                      "max_side": max_side, "seed": self.config.seed}
        return parameters, result

    def run_satotate(self, args: argparse.Namespace) -> Result:
        f, g = self._forms(args)
        z = args.z if args.z is not None else min(f.N, g.N)
        p = self._p(args)
        rows = []
        for table in ((f,) if g is f else (f, g)):
            statistic = satotate_sum(table, z)
            admissible = lf_prime_set(table, p, z)
            rows.append({"form": table.label, **asdict(statistic),
                         "mean_deviation": statistic.mean_deviation,
                         "lf_prime_count": len(admissible.primes), "lf_density": admissible.density,
                         "lf_expected_density": 1.0 / p})
        result = {"rows": rows, "pair_sum": satotate_pair_sum(f, g, z)}
        return {"f": f.label, "g": g.label, "z": z, "p": p}, result

    def run_recognize(self, args: argparse.Namespace) -> Result:
        bounds = self.config.recognition
        height_bound = args.height_bound if args.height_bound is not None else bounds.height_bound
        denominator_bound = (args.denominator_bound if args.denominator_bound is not None
                             else bounds.denominator_bound)

        if args.value is not None:
            digits = len(re.sub(r"[^0-9]", "", args.value.split("e")[0].split("E")[0]).lstrip("0")) or 1
            with mpmath.workdps(max(30, digits + 10)):
                x = mpmath.mpf(args.value)
                precision = args.precision if args.precision is not None else 10.0 ** (1 - digits)
                if args.m is None or args.m <= 2:
                    recognition = rationality_check(x, denominator_bound)
                else:
                    recognition = recognize_real_cyclotomic(x, args.m, height_bound, precision)
            parameters = {"value": args.value, "m": args.m, "height_bound": height_bound,
                          "denominator_bound": denominator_bound, "precision": args.precision}
            return parameters, recognition.to_dict()

        f, _ = self._forms(args)
        p = self._p(args)
        h_values = parse_h_range(args.h) if args.h else [2, 3]
        rows = []
        for h in h_values:
            certificate = certify_generation(f, p, h, height_bound, denominator_bound,
                                             self.config.cutoffs.afe_multiplier)
            if not certificate.consistent:
                self.logger.warning(f"Certificate at h={h} is inconsistent", f.label)
            rows.append(certificate.to_dict())
        parameters = {"form": f.label, "N": f.N, "p": p, "h": h_values, "height_bound": height_bound,
                      "denominator_bound": denominator_bound}
        return parameters, {"rows": rows}

    def run_selftest(self, args: argparse.Namespace) -> Result:
        N = max(SELFTEST_N, getattr(args, "N", None) or 0)
        level11 = resolve_form("level11", N, self.cache)
        delta = resolve_form("delta", N, self.cache)
        only = [name.strip() for name in args.only.split(",")] if args.only else None
        report = SelfTestSuite(level11, delta, seed=self.config.seed).run(only)
        return {"N": N, "seed": self.config.seed, "only": only}, report.to_dict()

    def run(self, args: argparse.Namespace) -> int:
        """
        Execute the parsed subcommand and emit its report.

        Returns:
            Process exit code
        """
        try:
            self.initialize(args)
            handler = getattr(self, f"run_{args.subcommand}")
            parameters, result = handler(args)
            self.writer.write(args.subcommand, parameters, result)
            if args.subcommand == "selftest" and not result["passed"]:
                self.logger.error(f"Self-test failures: {result['failures']}", "selftest")
                return EXIT_CONTRACT
            return EXIT_OK
        except NumericalContractError as e:
            self._report_failure(f"Numerical contract failed: {e}")
            return EXIT_CONTRACT
        except (ValidationError, ValueError, FileNotFoundError) as e:
            self._report_failure(f"Invalid input: {e}")
            return EXIT_VALIDATION
        finally:
            if self.logger:
                self.logger.log_shutdown()

    def _report_failure(self, message: str) -> None:
        if self.logger:
            self.logger.error(message)
        else:
            print(message, file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None,
                        help=f"Path to configuration file (default: {DEFAULT_CONFIG_PATH}, optional)")
    common.add_argument("--threads", type=int, default=None, help="Worker threads (0 = logical cores)")
    common.add_argument("--seed", type=int, default=None, help="Seed of all sampled quantities")
    common.add_argument("--format", choices=FORMATS, default=None, help="Report format")
    common.add_argument("--output", default=None, help="Report file (default: standard output)")
    common.add_argument("--cache-dir", default=None, help="Coefficient cache directory")
    common.add_argument("--fetch-url", default=None,
                        help="Download the --form q-expansion from this http(s) URL")
    common.add_argument("--log-level", default=None, help="Console log level")
    common.add_argument("--log-file", default=None, help="Log file path ('' disables the file log)")

    forms = argparse.ArgumentParser(add_help=False)
    forms.add_argument("--form", default=None, help="Built-in label (level11, delta) or q-expansion file")
    forms.add_argument("--form2", default=None, help="Second form g (defaults to --form)")
    forms.add_argument("--N", type=int, default=None, help="Coefficient bound of the tables")

    modulus = argparse.ArgumentParser(add_help=False)
    modulus.add_argument("--p", type=int, default=None, help="Odd prime")
    modulus.add_argument("--h", default=None, help="Exponent, range 2..6 or list 3,5")

    shifts = argparse.ArgumentParser(add_help=False)
    shifts.add_argument("--l1", type=int, default=None, help="Shift l1")
    shifts.add_argument("--l2", type=int, default=None, help="Shift l2")

    parser = argparse.ArgumentParser(description="WildTwist - Wild Twist Laboratory")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    characters = subparsers.add_parser("characters", parents=[common, modulus],
                                       help="Character table modulo p^h")
    characters.add_argument("--list-wild", action="store_true", help="Only wild characters")

    subparsers.add_parser("lvalue", parents=[common, forms, modulus],
                          help="Central values over the wild characters")

    moment = subparsers.add_parser("moment", parents=[common, forms, modulus, shifts],
                                   help="Orbit second moments against the main term")
    moment.add_argument("--method", choices=("orbit", "congruence"), default="orbit",
                        help="Orbit of single AFEs or congruence-sum route")

    trace = subparsers.add_parser("trace", parents=[common, forms, modulus], help="Trace sums")
    trace.add_argument("--ell", type=int, default=None, help="Prime ell")
    trace.add_argument("--t", type=int, default=None, help="Exponent t")
    trace.add_argument("--c", type=float, default=None, help="Coefficient c")

    errorterm = subparsers.add_parser("errorterm", parents=[common, forms, modulus, shifts],
                                      help="Off-diagonal congruence sums per xi class")
    errorterm.add_argument("--h0", type=int, default=None, help="Depth h0 of the xi classes")

    lattice = subparsers.add_parser("lattice", parents=[common, modulus, shifts],
                                    help="Congruence lattice laboratory")
    lattice.add_argument("--xi", type=int, default=None, help="Unit xi (default: Teichmuller lift of 2)")
    lattice.add_argument("--samples", type=int, default=None, help="Box samples")
    lattice.add_argument("--max-side", type=int, default=None, help="Largest box side")

    satotate = subparsers.add_parser("satotate", parents=[common, forms], help="Prime statistics")
    satotate.add_argument("--p", type=int, default=None, help="Prime for the admissible set")
    satotate.add_argument("--z", type=int, default=None, help="Prime bound (default: N)")

    recognize = subparsers.add_parser("recognize", parents=[common, forms, modulus],
                                      help="Field-generation certificates or a single recognition")
    recognize.add_argument("--value", default=None, help="Recognize this decimal instead of a certificate")
    recognize.add_argument("--m", type=int, default=None, help="Cyclotomic index for --value (<= 2: rational)")
    recognize.add_argument("--precision", type=float, default=None, help="Relative precision of --value")
    recognize.add_argument("--height-bound", type=int, default=None, help="Coefficient height bound")
    recognize.add_argument("--denominator-bound", type=int, default=None, help="Rational denominator bound")

    selftest = subparsers.add_parser("selftest", parents=[common], help="Run the invariant suite")
    selftest.add_argument("--only", default=None, help="Comma-separated check names")
    selftest.add_argument("--N", type=int, default=None, help="Coefficient bound (at least 20000)")

    return parser


def main(argv: Optional[List[str]] = None) -> None:
    """Main entry point for the application."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        app = WildTwistApplication(args.config)
        sys.exit(app.run(args))
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        sys.exit(EXIT_VALIDATION)


if __name__ == "__main__":
    main()
