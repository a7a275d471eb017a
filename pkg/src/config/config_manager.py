"""
Configuration Manager for WildTwist.

This module loads the YAML run configuration into typed dataclasses and
validates it. Command-line flags override the loaded values.
"""

import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import yaml
from sympy import isprime

from ..lfun.afe import PRODUCT_Y_CUTOFF
from ..reports.report_writer import FORMATS

DEFAULT_CONFIG_PATH = "config/lab_config.yaml"

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass
class FormConfig:
    """A newform source: built-in label or q-expansion file path."""
    source: str
    N: int = 20000


@dataclass
class CutoffConfig:
    """Working cutoffs shared by the L-value computations."""
    afe_multiplier: float = 1.0
    split: float = 1.0
    y_cutoff: float = PRODUCT_Y_CUTOFF


@dataclass
class MomentConfig:
    """Defaults for moment, trace and error-term runs."""
    p: int = 3
    h_values: List[int] = field(default_factory=lambda: [3, 4, 5, 6])
    l1: int = 1
    l2: int = 1
    ell: int = 13
    t: int = 1
    c: float = 1.0
    h0: int = 1


@dataclass
class RecognitionConfig:
    """Bounds for algebraic recognition."""
    height_bound: int = 10 ** 6
    denominator_bound: int = 10 ** 6


@dataclass
class LatticeConfig:
    """Defaults for the lattice laboratory."""
    samples: int = 200
    max_side: int = 100
    p: int = 5
    h: int = 4


@dataclass
class RunConfig:
    """Main run configuration."""
    forms: List[FormConfig] = field(default_factory=lambda: [FormConfig("level11")])
    cutoffs: CutoffConfig = field(default_factory=CutoffConfig)
    moment: MomentConfig = field(default_factory=MomentConfig)
    recognition: RecognitionConfig = field(default_factory=RecognitionConfig)
    lattice: LatticeConfig = field(default_factory=LatticeConfig)
    log_level: str = "INFO"
    log_file: str = "logs/wildtwist.log"
    cache_dir: str = "cache/coefficients"
    threads: int = 0
    seed: int = 0
    output_format: str = "json"
    output_path: Optional[str] = None
    fetch_url: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        """Parameters that determine report contents (paths and logging excluded)."""
        return {
            "forms": [{"source": form.source, "N": form.N} for form in self.forms],
            "cutoffs": vars(self.cutoffs).copy(),
            "moment": vars(self.moment).copy(),
            "recognition": vars(self.recognition).copy(),
            "lattice": vars(self.lattice).copy(),
            "seed": self.seed,
        }


class ConfigManager:
    """Manages the run configuration from a YAML file."""

    def __init__(self, config_path: str = DEFAULT_CONFIG_PATH):
        """
        Initialize ConfigManager with path to configuration file.

        Args:
            config_path: Path to the YAML configuration file
        """
        self.config_path = config_path
        self._config: Optional[RunConfig] = None

    def load_config(self, required: bool = True) -> RunConfig:
        """
        Load configuration from the YAML file.

        Args:
            required: When False a missing file yields the built-in defaults

        Returns:
            RunConfig: Loaded and validated configuration

        Raises:
            FileNotFoundError: If the file is required and doesn't exist
            ValueError: If the YAML is malformed or a value is invalid
        """
        if not os.path.exists(self.config_path):
            if required:
                raise FileNotFoundError(f"Configuration file not found: {self.config_path}")
            self._config = RunConfig()
            self._validate_config(self._config)
            return self._config

        try:
            with open(self.config_path, 'r', encoding='utf-8') as file:
                config_data = yaml.safe_load(file) or {}
        except yaml.YAMLError as e:
            raise ValueError(f"Invalid YAML in config file {self.config_path}: {e}")
        if not isinstance(config_data, dict):
            raise ValueError(f"Config file {self.config_path} must hold a mapping at the top level")

        self._config = self._parse_config(config_data)
        self._validate_config(self._config)
        return self._config

    @staticmethod
    def _section(config_data: Dict[str, Any], name: str) -> Dict[str, Any]:
        data = config_data.get(name) or {}
        if not isinstance(data, dict):
            raise ValueError(f"Section '{name}' must be a mapping")
        return data

    def _parse_config(self, config_data: Dict[str, Any]) -> RunConfig:
        """Parse raw configuration data into typed objects."""
        defaults = RunConfig()

        forms = []
        for form_data in config_data.get('forms') or []:
            if isinstance(form_data, str):
                form_data = {'source': form_data}
            forms.append(FormConfig(source=form_data.get('source'), N=form_data.get('N', 20000)))

        cutoff_data = self._section(config_data, 'cutoffs')
        cutoffs = CutoffConfig(
            afe_multiplier=cutoff_data.get('afe_multiplier', 1.0),
            split=cutoff_data.get('split', 1.0),
            y_cutoff=cutoff_data.get('y_cutoff', PRODUCT_Y_CUTOFF),
        )

        moment_data = self._section(config_data, 'moment')
        moment = MomentConfig(
            p=moment_data.get('p', 3),
            h_values=list(moment_data.get('h_values', [3, 4, 5, 6])),
            l1=moment_data.get('l1', 1),
            l2=moment_data.get('l2', 1),
            ell=moment_data.get('ell', 13),
            t=moment_data.get('t', 1),
            c=moment_data.get('c', 1.0),
            h0=moment_data.get('h0', 1),
        )

        recognition_data = self._section(config_data, 'recognition')
        recognition = RecognitionConfig(
            height_bound=recognition_data.get('height_bound', 10 ** 6),
            denominator_bound=recognition_data.get('denominator_bound', 10 ** 6),
        )

        lattice_data = self._section(config_data, 'lattice')
        lattice = LatticeConfig(
            samples=lattice_data.get('samples', 200),
            max_side=lattice_data.get('max_side', 100),
            p=lattice_data.get('p', 5),
            h=lattice_data.get('h', 4),
        )

        return RunConfig(
            forms=forms or defaults.forms,
            cutoffs=cutoffs,
            moment=moment,
            recognition=recognition,
            lattice=lattice,
            log_level=config_data.get('log_level', 'INFO'),
            log_file=config_data.get('log_file', 'logs/wildtwist.log'),
            cache_dir=config_data.get('cache_dir', 'cache/coefficients'),
            threads=config_data.get('threads', 0),
            seed=config_data.get('seed', 0),
            output_format=config_data.get('output_format', 'json'),
            output_path=config_data.get('output_path'),
            fetch_url=config_data.get('fetch_url'),
        )

    def _validate_config(self, config: RunConfig) -> None:
        """
        Validate configuration for required fields and logical consistency.

        Args:
            config: Configuration to validate

        Raises:
            ValueError: If configuration is invalid
        """
        if str(config.log_level).upper() not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {LOG_LEVELS}, got '{config.log_level}'")
        if not isinstance(config.threads, int) or config.threads < 0:
            raise ValueError("threads must be a non-negative integer (0 = logical cores)")
        if not isinstance(config.seed, int):
            raise ValueError("seed must be an integer")
        if config.output_format not in FORMATS:
            raise ValueError(f"output_format must be one of {FORMATS}, got '{config.output_format}'")
        if config.fetch_url and not config.fetch_url.startswith(('http://', 'https://')):
            raise ValueError("fetch_url must start with http:// or https://")

        for i, form in enumerate(config.forms):
            if not form.source:
                raise ValueError(f"Form {i}: source is required")
            if not isinstance(form.N, int) or form.N < 1:
                raise ValueError(f"Form {i}: N must be a positive integer")

        cutoffs = config.cutoffs
        if cutoffs.afe_multiplier <= 0:
            raise ValueError("cutoffs.afe_multiplier must be positive")
        if cutoffs.split <= 0:
            raise ValueError("cutoffs.split must be positive")
        if cutoffs.y_cutoff <= 1:
            raise ValueError("cutoffs.y_cutoff must exceed 1")

        moment = config.moment
        if moment.p < 3 or not isprime(moment.p):
            raise ValueError(f"moment.p must be an odd prime, got {moment.p}")
        if not moment.h_values or any(h < 2 for h in moment.h_values):
            raise ValueError("moment.h_values must be a nonempty list of integers >= 2")
        if moment.l1 < 1 or moment.l2 < 1:
            raise ValueError("moment.l1 and moment.l2 must be positive")
        if moment.c == 0:
            raise ValueError("moment.c must be nonzero")

        if config.recognition.height_bound < 1:
            raise ValueError("recognition.height_bound must be positive")
        if config.recognition.denominator_bound < 1:
            raise ValueError("recognition.denominator_bound must be positive")

        lattice = config.lattice
        if lattice.samples < 1:
            raise ValueError("lattice.samples must be positive")
        if lattice.max_side < 1:
            raise ValueError("lattice.max_side must be positive")
        if lattice.p < 3 or not isprime(lattice.p):
            raise ValueError(f"lattice.p must be an odd prime, got {lattice.p}")
        if lattice.h < 1:
            raise ValueError("lattice.h must be positive")

    @property
    def config(self) -> Optional[RunConfig]:
        """Get the loaded configuration."""
        return self._config

    def get_form(self, source: str) -> Optional[FormConfig]:
        """
        Get a form configuration by source.

        Args:
            source: Label or path to search for

        Returns:
            FormConfig if found, None otherwise
        """
        if not self._config:
            return None
        for form in self._config.forms:
            if form.source == source:
                return form
        return None
