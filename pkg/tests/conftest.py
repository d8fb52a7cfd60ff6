"""Central tolerance constants and shared fixtures for the test suite.

Usage:
    from tests.conftest import STRUCTURAL_TOLERANCE
    assert max_abs(actual - expected) <= STRUCTURAL_TOLERANCE
"""

from typing import Final

import numpy as np
import pytest

from sotforge.channels import Channel, random_channel, random_state
from sotforge.reports import SuiteConfig
from sotforge.tensor import Operator, max_abs

# ===== Tolerance levels =====

# Exact: closed-form identities that only see rounding
EXACT_TOLERANCE: Final[float] = 1e-12
"""Entrywise agreement of two computations of the same closed form
(e.g. Bloom(0.5) against FP, swap-conjugation of an FP time expansion)."""

# Structural: identities that go through an eigendecomposition or an inverse
STRUCTURAL_TOLERANCE: Final[float] = 1e-10
"""Marginals, partial traces, conditional-state round trips on well-conditioned states."""

# Suite: the default pass tolerance of the axiom suite
SUITE_TOLERANCE: Final[float] = 1e-9
"""Same value as sotforge.constants.SUITE_TOLERANCE; deviations above it are not a pass."""

# Failure: minimum size of a genuine violation
FAILURE_MARGIN: Final[float] = 1e-3
"""A witness has to exceed this to count as a failure (the suite's fail threshold)."""


# ===== Tolerance guideline by use =====
#
# | Use                          | Constant              | Value |
# |------------------------------|-----------------------|-------|
# | Closed-form equalities       | EXACT_TOLERANCE       | 1e-12 |
# | Marginals / round trips      | STRUCTURAL_TOLERANCE  | 1e-10 |
# | Axiom suite comparisons      | SUITE_TOLERANCE       | 1e-9  |
# | Failure witnesses            | FAILURE_MARGIN        | 1e-3  |


def assert_close(
    actual: Operator | np.ndarray, expected: Operator | np.ndarray, tol: float = STRUCTURAL_TOLERANCE
) -> None:
    """Entrywise comparison in the max-abs norm with a readable failure message."""
    a = actual.data if isinstance(actual, Operator) else np.asarray(actual)
    b = expected.data if isinstance(expected, Operator) else np.asarray(expected)
    assert a.shape == b.shape, f"Shape mismatch: {a.shape} != {b.shape}"
    deviation = max_abs(a - b)
    assert deviation <= tol, f"max |actual - expected| = {deviation:.3e} > {tol:.1e}"


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def qubit_state() -> Operator:
    return random_state(2, seed=7)


@pytest.fixture
def qutrit_state() -> Operator:
    return random_state(3, seed=11)


@pytest.fixture
def qubit_channel() -> Channel:
    return random_channel(2, 2, seed=3)


@pytest.fixture
def qutrit_channel() -> Channel:
    return random_channel(3, 3, seed=5)


@pytest.fixture
def small_config() -> SuiteConfig:
    """A suite configuration small enough for unit tests (dims 2 and 3, few samples)."""
    return SuiteConfig(dims=(2, 3), samples=6, seed=20240229)
