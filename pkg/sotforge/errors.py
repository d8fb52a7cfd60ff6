"""Exception hierarchy.

Invalid inputs raise subclasses of ``ValueError`` so callers can keep catching
the builtin; everything raised by the package derives from ``SotforgeError``.
"""

from __future__ import annotations

from collections.abc import Sequence


class SotforgeError(Exception):
    """Base class for all package errors."""


class DimensionError(SotforgeError, ValueError):
    """Shapes, subsystem dimensions or block decompositions do not fit."""


class HermiticityError(SotforgeError, ValueError):
    """An operator that must be Hermitian (or PSD) is not."""


class ChannelError(SotforgeError, ValueError):
    """A channel cannot be built from the given data."""


class StochasticMatrixError(ChannelError):
    """A classical transition matrix is not column-stochastic."""


class StarConfigurationError(SotforgeError, ValueError):
    """A star-product family was constructed with invalid parameters."""


class SelectorError(StarConfigurationError):
    """A star selector string could not be parsed."""


class UnsupportedStarError(SotforgeError):
    """The requested operation needs a state-linear star product."""


class ConditioningError(SotforgeError, ValueError):
    """A superoperator is too ill-conditioned to invert."""


class SingularMarginalError(SotforgeError, ValueError):
    """The symmetric-bloom inverse meets weight on kernel-connected eigenspaces.

    Attributes:
        blocks: ``(i, j, leak)`` triples naming the eigenspace pair and the
            largest entry of ``σ`` found there.
    """

    def __init__(self, blocks: Sequence[tuple[int, int, float]]):
        self.blocks = list(blocks)
        pairs = ", ".join(f"({i},{j}): {leak:.3e}" for i, j, leak in self.blocks)
        super().__init__(f"Singular marginal: kernel eigenspace pairs {pairs}")
