"""
# +==== BEGIN bridgelab =================+
# PROJECT: bridgelab
# FILE: conftest.py
# CREATION DATE: 18-10-2026
# LAST Modified: 18-10-2026
# DESCRIPTION:
# A toolkit for Schrödinger bridge transports, validated against closed-form oracles.
# /STOP
# COPYRIGHT: (c) Asperguide
# PURPOSE: Pytest configuration and shared fixtures for the bridgelab tests.
# // AR
# +==== END bridgelab =================+
"""

import numpy as np
import pytest

from bridgelab.rogger import RI


def pytest_addoption(parser) -> None:
    parser.addoption(
        "--run-slow", action="store_true", default=False,
        help="Run the long Monte-Carlo acceptance tests"
    )


def pytest_configure(config) -> None:
    config.addinivalue_line("markers", "slow: long Monte-Carlo run, enabled by --run-slow")


def pytest_collection_modifyitems(config, items) -> None:
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def quiet_logs():
    """Keep the logging singleton quiet between tests, whatever a test toggled."""
    RI.re_toggle(program_log=False, program_debug_log=False)
    yield
    RI.re_toggle(program_log=False, program_debug_log=False)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
