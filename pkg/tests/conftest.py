"""
Shared symbols for the test suite.
"""
import numpy as np
import pytest

from symbols.core import make_symbol
from symbols.expressions import polynomial


@pytest.fixture
def rolewicz():
    """2/z: twice the backward shift."""
    return make_symbol([0.0, 2.0], analytic_radius=2.0)


@pytest.fixture
def contraction():
    """0.5/z: norm one half, never hypercyclic."""
    return make_symbol([0.0, 0.5], analytic_radius=2.0)


@pytest.fixture
def tridiagonal():
    """2/z + z."""
    return make_symbol([0.0, 2.0], tail=polynomial([0.0, 1.0]), analytic_radius=2.0)


@pytest.fixture
def doubly_covered():
    """1/z + 2z takes values inside its boundary ellipse twice while N = 1."""
    return make_symbol([0.0, 1.0], tail=polynomial([0.0, 2.0]), analytic_radius=2.0)


@pytest.fixture
def with_pole():
    """R(w) = 0.3 + w + 0.5 w^2 + 1/(w - 2) - 0.2/(w - 2)^2, no tail."""
    return make_symbol([0.3, 1.0, 0.5], [(2.0, [1.0, -0.2])])


@pytest.fixture
def rng():
    return np.random.default_rng(0)
