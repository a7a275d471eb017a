"""Shared fixtures for the WildTwist test suite."""

import pytest

from src.newforms import eta_product_coefficients
from src.utils.logger import initialize_logger


@pytest.fixture(autouse=True, scope="session")
def quiet_logger():
    """Console-only logger so tests never write log files."""
    return initialize_logger(log_file="", log_level="WARNING")


@pytest.fixture(scope="session")
def level11_small():
    return eta_product_coefficients("level11", 20000)


@pytest.fixture(scope="session")
def delta_small():
    return eta_product_coefficients("delta", 20000)


@pytest.fixture(scope="session")
def level11_medium():
    return eta_product_coefficients("level11", 400000)


@pytest.fixture(scope="session")
def delta_medium():
    return eta_product_coefficients("delta", 400000)


@pytest.fixture(scope="session")
def level11_large():
    """Long enough for the product sums at 5^4 with y_c = 2."""
    return eta_product_coefficients("level11", 8600000)
