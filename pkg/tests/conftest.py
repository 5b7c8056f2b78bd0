"""Shared fixtures for the MAPFlow test suite"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.settings import REFERENCE_CONFIGS  # noqa: E402
from core.suite import run_reference_suite  # noqa: E402
from core.topology import ArchitectureSpec, build_architecture  # noqa: E402


@pytest.fixture
def config_a():
    return REFERENCE_CONFIGS["A"]


@pytest.fixture
def config_b():
    return REFERENCE_CONFIGS["B"]


@pytest.fixture
def make_system():
    """build_architecture by code with configuration A defaults"""
    def _make(code, s=0.8, f=0.1, n_agents=5, b=1.0, w=1.0):
        return build_architecture(ArchitectureSpec(code, n_agents), s, f, b, w)
    return _make


@pytest.fixture(scope="session")
def reference_suite():
    return run_reference_suite(None)
