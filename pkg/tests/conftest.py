"""
Shared fixtures for the contembed test-suite

Markers:
  - property_based: hypothesis property-based tests (fuzz)
  - slow: randomized oracle sweeps
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from contembed.config import load_config  # noqa: E402
from contembed.fixtures import builtin, make_rng  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "property_based: hypothesis property-based tests (fuzz)")
    config.addinivalue_line("markers", "slow: randomized oracle sweeps")


@pytest.fixture(scope="session")
def embed_config():
    return load_config()


@pytest.fixture
def rng(embed_config):
    """Seeded generator; CONTEMBED_SEED pins it, otherwise a fixed default keeps runs stable"""
    return make_rng(embed_config.seed if embed_config.seed is not None else 20240917)


@pytest.fixture(scope="session")
def tent():
    return builtin("tent")


@pytest.fixture(scope="session")
def ex67():
    return builtin("ex67")


@pytest.fixture(scope="session")
def minc():
    return builtin("minc")


@pytest.fixture(scope="session")
def nadler():
    return builtin("nadler")


@pytest.fixture(scope="session")
def fig1():
    return builtin("fig1")
