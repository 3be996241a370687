"""
Shared fixtures
"""
import math

import numpy as np
import pytest

from hfgen.config import get_settings
from hfgen.core.operators import build_rotor_gauge_a, build_rotor_gauge_b


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def settings_env(monkeypatch):
    """Set HFGEN settings through the environment for one test."""
    def apply(**values):
        for key, value in values.items():
            monkeypatch.setenv(key, str(value))
        get_settings.cache_clear()
        return get_settings()
    return apply


@pytest.fixture
def rotor_a():
    return build_rotor_gauge_a(256, 0.3)


@pytest.fixture
def rotor_b():
    return build_rotor_gauge_b(256, 0.3)


def discrete_rotor_energy(n, epsilon, n_points):
    h = 2.0 * math.pi / n_points
    return (1.0 - math.cos((n - epsilon) * h)) / (h * h)


def discrete_rotor_slope(n, epsilon, n_points):
    h = 2.0 * math.pi / n_points
    return -math.sin((n - epsilon) * h) / h


def random_hermitian(size, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    return a + a.conj().T
