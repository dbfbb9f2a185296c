"""Shared pytest setup: repo root on sys.path, logs under a temp dir, the slow marker."""
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: Monte Carlo checks at n up to 2000")


@pytest.fixture(autouse=True)
def _log_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("GPDD_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setenv("GPDD_THREADS", "1")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
