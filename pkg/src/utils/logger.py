"""
Logging utility for WildTwist.

This module provides centralized logging functionality with file and console output.
"""

import logging
import os
from typing import Any, Optional


class WildTwistLogger:
    """Custom logger for WildTwist runs."""

    def __init__(self, log_file: str = "logs/wildtwist.log", log_level: str = "INFO"):
        """
        Initialize the logger.

        Args:
            log_file: Path to the log file (empty string disables the file handler)
            log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        """
        self.log_file = log_file
        self.log_level = getattr(logging, log_level.upper(), logging.INFO)
        self.logger = None
        self._setup_logger()

    def _setup_logger(self) -> None:
        """Set up the logger with file and console handlers."""
        self.logger = logging.getLogger('WildTwist')
        self.logger.setLevel(logging.DEBUG)

        # Clear existing handlers to avoid duplicates
        self.logger.handlers.clear()

        file_formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

        console_formatter = logging.Formatter(
            '%(asctime)s - %(levelname)s - %(message)s',
            datefmt='%H:%M:%S'
        )

        if self.log_file:
            log_dir = os.path.dirname(self.log_file)
            try:
                if log_dir and not os.path.exists(log_dir):
                    os.makedirs(log_dir, exist_ok=True)
                file_handler = logging.FileHandler(self.log_file, encoding='utf-8')
                file_handler.setLevel(logging.DEBUG)
                file_handler.setFormatter(file_formatter)
                self.logger.addHandler(file_handler)
            except (IOError, OSError) as e:
                print(f"Warning: Could not create log file {self.log_file}: {e}")

        # Reports go to stdout, so diagnostics stay on stderr
        console_handler = logging.StreamHandler()
        console_handler.setLevel(self.log_level)
        console_handler.setFormatter(console_formatter)
        self.logger.addHandler(console_handler)

    @staticmethod
    def _tag(message: str, context: Optional[str]) -> str:
        return f"[{context}] {message}" if context else message

    def info(self, message: str, context: Optional[str] = None) -> None:
        """Log an info message."""
        self.logger.info(self._tag(message, context))

    def warning(self, message: str, context: Optional[str] = None) -> None:
        """Log a warning message."""
        self.logger.warning(self._tag(message, context))

    def error(self, message: str, context: Optional[str] = None, exc_info: bool = False) -> None:
        """Log an error message."""
        self.logger.error(self._tag(message, context), exc_info=exc_info)

    def debug(self, message: str, context: Optional[str] = None) -> None:
        """Log a debug message."""
        self.logger.debug(self._tag(message, context))

    def critical(self, message: str, context: Optional[str] = None) -> None:
        """Log a critical message."""
        self.logger.critical(self._tag(message, context))

    def log_stage(self, name: str, context: Optional[str] = None, **fields: Any) -> None:
        """
        Log the start of a computation stage with its parameters.

        Args:
            name: Stage name (e.g. "orbit", "product_afe")
            context: Optional context tag (form label, modulus)
            **fields: Parameters rendered as key=value pairs
        """
        rendered = ", ".join(f"{key}={value}" for key, value in fields.items())
        self.debug(f"STAGE {name}" + (f" - {rendered}" if rendered else ""), context)

    def log_lvalue(self, value: complex, method: str, terms_used: int,
                   err_estimate: float, context: Optional[str] = None) -> None:
        """
        Log a computed L-value with its error budget.

        Args:
            value: The computed value
            method: Evaluation method tag
            terms_used: Number of Dirichlet-series terms summed
            err_estimate: Absolute error bound
            context: Optional context tag
        """
        self.debug(f"LVALUE {method} - value={value.real:.12g}{value.imag:+.3g}j, "
                   f"terms={terms_used}, err={err_estimate:.2e}", context)

    def log_contract(self, name: str, passed: bool, detail: str = "",
                     context: Optional[str] = None) -> None:
        """
        Log the outcome of a numerical contract check.

        Args:
            name: Contract name
            passed: Whether the contract held
            detail: Measured quantities
            context: Optional context tag
        """
        message = f"CONTRACT {name}: {'PASS' if passed else 'FAIL'}"
        if detail:
            message += f" - {detail}"
        if passed:
            self.info(message, context)
        else:
            self.error(message, context)

    def log_cache_event(self, action: str, key: str) -> None:
        """
        Log a coefficient-cache event.

        Args:
            action: hit, superset_hit, miss, store, corrupt, download
            key: Cache key
        """
        action = action.upper()
        if action == "CORRUPT":
            self.warning(f"CACHE {action} - regenerating", key)
        else:
            self.debug(f"CACHE {action}", key)

    def log_startup(self, subcommand: str, threads: int) -> None:
        """
        Log run startup information.

        Args:
            subcommand: Subcommand being executed
            threads: Worker thread count
        """
        self.info(f"WildTwist started - Subcommand: {subcommand}, Threads: {threads}")

    def log_shutdown(self) -> None:
        """Log run shutdown."""
        self.info("WildTwist finished")


# Global logger instance
_logger_instance: Optional[WildTwistLogger] = None


def get_logger(log_file: str = "logs/wildtwist.log", log_level: str = "INFO") -> WildTwistLogger:
    """
    Get the global logger instance.

    Args:
        log_file: Path to the log file (used only on first call)
        log_level: Logging level (used only on first call)

    Returns:
        WildTwistLogger instance
    """
    global _logger_instance

    if _logger_instance is None:
        _logger_instance = WildTwistLogger(log_file, log_level)

    return _logger_instance


def initialize_logger(log_file: str = "logs/wildtwist.log", log_level: str = "INFO") -> WildTwistLogger:
    """
    Initialize the global logger instance.

    Args:
        log_file: Path to the log file
        log_level: Logging level

    Returns:
        WildTwistLogger instance
    """
    global _logger_instance
    _logger_instance = WildTwistLogger(log_file, log_level)
    return _logger_instance
