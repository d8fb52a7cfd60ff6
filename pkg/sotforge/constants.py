"""Central numeric constants.

Every tolerance used by the library is defined here; modules import the
constant instead of repeating the literal.

Usage:
    from sotforge.constants import HERMITIAN_TOL
    if max_abs(h - h.conj().T) > HERMITIAN_TOL: ...
"""

from typing import Final

# ===== Structural tolerances (max-entry absolute norm) =====

HERMITIAN_TOL: Final[float] = 1e-10
"""Hermiticity detection for spectral decompositions and square roots.
Double precision leaves ample headroom at the dimensions handled here (≤ 8)."""

GROUPING_TOL: Final[float] = 1e-8
"""Eigenvalues closer than this are merged into one eigenspace.
The symmetric-bloom inverse weights 2/(λi+λj) are unstable across near-degenerate splits."""

TP_TOL: Final[float] = 1e-10
"""Trace-preservation flag and Kraus/superoperator consistency."""

KRAUS_TOL: Final[float] = 1e-9
"""Allowed excess of Σ K†K over the identity for trace non-increasing operations."""

CP_TOL: Final[float] = 1e-9
"""Smallest Choi eigenvalue still accepted as completely positive."""

MARGINAL_TOL: Final[float] = 1e-10
"""Partial-trace conditions on Ξ and D operators of the mean-marginal and Ξ-perturbed families."""

STATE_TOL: Final[float] = 1e-12
"""Negative-eigenvalue slack when a state is required to be positive semidefinite."""

# ===== Axiom suite =====

SUITE_TOLERANCE: Final[float] = 1e-9
"""Maximum deviation for an axiom check to pass."""

FAIL_THRESHOLD: Final[float] = 1e-3
"""Minimum deviation for an axiom check to fail; anything between is inconclusive."""

DEFAULT_DIMS: Final[tuple[int, ...]] = (2, 3, 4)
DEFAULT_SAMPLES: Final[int] = 50
DEFAULT_SEED: Final[int] = 20240229

# ===== Inference =====

SINGULAR_CUTOFF_REL: Final[float] = 1e-10
"""Eigenvalue pairs with λi+λj below this fraction of max λ are treated as kernel pairs."""

KERNEL_LEAK_TOL: Final[float] = 1e-9
"""Largest tolerated ⟨λi|σ|λj⟩ on a kernel pair before the inverse is declared singular."""

MAX_CONDITION: Final[float] = 1e12
"""Numerical superoperator inversion is refused above this condition number."""
