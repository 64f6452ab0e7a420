# tests/conftest.py
# Shared fixtures

import numpy as np
import pytest

import utils.logger
from core.csiszar import bernoulli_joint


@pytest.fixture(autouse=True)
def no_session_files(monkeypatch):
    """Keep session logs in memory during tests"""
    monkeypatch.setattr(utils.logger, "SESSION_LOGGING", False)
    monkeypatch.setattr(utils.logger, "_logger", None)


@pytest.fixture
def bernoulli_example():
    """p = q = 1/2, r = 5/16"""
    return bernoulli_joint(0.5, 0.5, 5.0 / 16.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
