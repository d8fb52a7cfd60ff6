"""Quantum channels stored as superoperators.

A :class:`Channel` keeps the ``(d_out², d_in²)`` matrix acting on row-major
``vec`` (see :func:`sotforge.tensor.vec_index`): column ``(i, j)`` is
``vec(ℰ(|i⟩⟨j|))``.

Two bipartite encodings of a channel appear in this package and are easy to mix up:

* the Jamiołkowski channel state ``𝒟[ℰ] = Σ_ij |i⟩⟨j| ⊗ ℰ(|j⟩⟨i|) = (id ⊗ ℰ)(F)``,
  used by every star product and by axiom (J);
* the Choi matrix ``Σ_ij |i⟩⟨j| ⊗ ℰ(|i⟩⟨j|)``, the partial transpose of the former,
  used only to decide complete positivity.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike
from scipy.stats import unitary_group

from sotforge.constants import CP_TOL, KRAUS_TOL, TP_TOL
from sotforge.errors import ChannelError, DimensionError, StochasticMatrixError
from sotforge.tensor import (
    ComplexArray,
    DimsSpec,
    Operator,
    apply_local,
    as_operator,
    block_isometry,
    max_abs,
    swap_operator,
    vec,
)

logger = logging.getLogger(__name__)

SeedLike = int | Sequence[int] | np.random.Generator | None


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _spec(dims: DimsSpec | Sequence[int] | int) -> DimsSpec:
    if isinstance(dims, DimsSpec):
        return dims
    if isinstance(dims, int):
        return DimsSpec((dims,))
    return DimsSpec(tuple(dims))


def _kraus_superop(kraus: Sequence[ComplexArray]) -> ComplexArray:
    return np.asarray(sum(np.kron(k, k.conj()) for k in kraus))


def _frozen(a: ArrayLike) -> ComplexArray:
    arr = np.array(a, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Channel:
    """Linear map between operator spaces.

    ``is_cp`` and ``is_tp`` are computed on construction. When Kraus operators are
    supplied the superoperator must agree with them within ``TP_TOL``.
    """

    superop: ComplexArray
    in_dims: DimsSpec
    out_dims: DimsSpec
    kraus: tuple[ComplexArray, ...] | None = None
    is_cp: bool = field(init=False)
    is_tp: bool = field(init=False)

    def __post_init__(self) -> None:
        s = np.array(self.superop, dtype=np.complex128)
        in_dims, out_dims = _spec(self.in_dims), _spec(self.out_dims)
        d_in, d_out = in_dims.total, out_dims.total
        if s.shape != (d_out * d_out, d_in * d_in):
            raise DimensionError(f"Superoperator shape {s.shape} does not map dimension {d_in} to {d_out}")
        if not np.all(np.isfinite(s)):
            raise ChannelError("Superoperator entries must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "superop", s)
        object.__setattr__(self, "in_dims", in_dims)
        object.__setattr__(self, "out_dims", out_dims)

        if self.kraus is not None:
            kraus = tuple(_frozen(k) for k in self.kraus)
            object.__setattr__(self, "kraus", kraus)
            mismatch = max_abs(_kraus_superop(kraus) - s)
            if mismatch > TP_TOL:
                raise ChannelError(f"Kraus operators disagree with superoperator by {mismatch:.3e}")
            object.__setattr__(self, "is_cp", True)
        else:
            object.__setattr__(self, "is_cp", _choi_is_psd(s, d_in, d_out))

        traces = np.einsum("aaij->ij", s.reshape(d_out, d_out, d_in, d_in))
        object.__setattr__(self, "is_tp", max_abs(traces - np.eye(d_in)) <= TP_TOL)

    @property
    def d_in(self) -> int:
        return self.in_dims.total

    @property
    def d_out(self) -> int:
        return self.out_dims.total

    def __call__(self, x: Operator) -> Operator:
        return apply(self, x)

    def __repr__(self) -> str:
        return f"Channel({self.d_in}->{self.d_out}, cp={self.is_cp}, tp={self.is_tp})"


def _choi_array(s: ComplexArray, d_in: int, d_out: int) -> ComplexArray:
    s4 = s.reshape(d_out, d_out, d_in, d_in)
    return s4.transpose(2, 0, 3, 1).reshape(d_in * d_out, d_in * d_out)


def _choi_is_psd(s: ComplexArray, d_in: int, d_out: int) -> bool:
    choi = _choi_array(s, d_in, d_out)
    if max_abs(choi - choi.conj().T) > TP_TOL:
        return False
    return bool(np.linalg.eigvalsh(0.5 * (choi + choi.conj().T)).min() >= -CP_TOL)


# ===== Construction =====


def channel_from_superop(
    superop: ArrayLike, in_dims: DimsSpec | Sequence[int] | int, out_dims: DimsSpec | Sequence[int] | int
) -> Channel:
    return Channel(np.asarray(superop, dtype=np.complex128), _spec(in_dims), _spec(out_dims))


def channel_from_kraus(
    ops: Sequence[Operator | ArrayLike],
    in_dims: DimsSpec | Sequence[int] | int | None = None,
    out_dims: DimsSpec | Sequence[int] | int | None = None,
) -> Channel:
    """Build a CP trace non-increasing map ``X ↦ Σ K X K†``.

    Raises:
        DimensionError: If the Kraus operators do not share the shape ``d_out × d_in``.
        ChannelError: If ``Σ K†K`` exceeds the identity by more than ``KRAUS_TOL``.
    """
    if not ops:
        raise ChannelError("At least one Kraus operator is required")
    arrays = [np.asarray(k.data if isinstance(k, Operator) else k, dtype=np.complex128) for k in ops]
    shape = arrays[0].shape
    if len(shape) != 2 or any(a.shape != shape for a in arrays):
        raise DimensionError(f"Kraus operators must share one 2-D shape, got {[a.shape for a in arrays]}")
    d_out, d_in = shape
    in_spec = _spec(in_dims if in_dims is not None else d_in)
    out_spec = _spec(out_dims if out_dims is not None else d_out)
    if (in_spec.total, out_spec.total) != (d_in, d_out):
        raise DimensionError(f"Kraus shape {shape} does not match dims in={in_spec.total}, out={out_spec.total}")

    gram = sum(a.conj().T @ a for a in arrays)
    excess = float(np.linalg.eigvalsh(0.5 * (gram + gram.conj().T) - np.eye(d_in)).max())
    if excess > KRAUS_TOL:
        raise ChannelError(f"Σ K†K exceeds the identity by {excess:.3e} (trace increasing)")

    kraus = tuple(_frozen(a) for a in arrays)
    return Channel(_kraus_superop(kraus), in_spec, out_spec, kraus)


def channel_from_isometry(v: ArrayLike, d_out: int, env_dim: int) -> Channel:
    """Stinespring form ``ℰ(ρ) = Tr_Env[V ρ V†]`` with ``V: A → B ⊗ Env``."""
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 2 or v.shape[0] != d_out * env_dim:
        raise DimensionError(f"Isometry of shape {v.shape} does not map into {d_out}⊗{env_dim}")
    d_in = v.shape[1]
    blocks = v.reshape(d_out, env_dim, d_in)
    return channel_from_kraus([blocks[:, e, :] for e in range(env_dim)], d_in, d_out)


def identity_channel(d: int) -> Channel:
    return channel_from_kraus([np.eye(d)], d, d)


def unitary_channel(u: Operator | ArrayLike) -> Channel:
    """Ad_U. Any square contraction is accepted; only unitaries are trace preserving."""
    arr = u.data if isinstance(u, Operator) else np.asarray(u, dtype=np.complex128)
    dims = u.dims if isinstance(u, Operator) else None
    return channel_from_kraus([arr], dims, dims)


def full_dephasing(d: int) -> Channel:
    return dephasing_channel(DimsSpec((d,), (1,) * d))


def transpose_map(d: int) -> Channel:
    """τ ↦ τᵀ. Positive but not completely positive for d ≥ 2."""
    return Channel(swap_operator(d).data, DimsSpec((d,)), DimsSpec((d,)))


def constant_channel(sigma: Operator, d_in: int) -> Channel:
    """X ↦ Tr[X]·σ."""
    superop = np.outer(vec(sigma), vec(np.eye(d_in)))
    return Channel(superop, DimsSpec((d_in,)), sigma.dims)


def classical_channel(p: ArrayLike) -> Channel:
    """Measure in the computational basis, then emit ``|y⟩⟨y|`` with probability ``P(y|x)``.

    Args:
        p: Column-stochastic matrix with ``p[y, x] = P(y|x)``.

    Raises:
        StochasticMatrixError: Negative entries or columns not summing to one.
    """
    p = np.asarray(p, dtype=np.float64)
    if p.ndim != 2:
        raise StochasticMatrixError(f"Transition matrix must be 2-D, got shape {p.shape}")
    if not np.all(np.isfinite(p)) or p.min() < 0:
        raise StochasticMatrixError("Transition matrix entries must be finite and non-negative")
    col_sums = p.sum(axis=0)
    if max_abs(col_sums - 1.0) > TP_TOL:
        raise StochasticMatrixError(f"Columns must sum to 1, got sums {col_sums.tolist()}")
    d_out, d_in = p.shape
    kraus = []
    for x in range(d_in):
        for y in range(d_out):
            if p[y, x] > 0:
                k = np.zeros((d_out, d_in), dtype=np.complex128)
                k[y, x] = math.sqrt(p[y, x])
                kraus.append(k)
    return channel_from_kraus(kraus, d_in, d_out)


def _block_projector_full(spec: DimsSpec, index: int, basis: Operator | None) -> ComplexArray:
    v = block_isometry(spec, index, basis)
    factors = [np.eye(d, dtype=np.complex128) for d in spec.subsystem_dims]
    factors[spec.block_axis] = v @ v.conj().T
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


def dephasing_channel(spec: DimsSpec, basis: Operator | None = None) -> Channel:
    """𝒟_A = Σ_i Ad_{𝟙_{A_i}} for the block decomposition carried by ``spec``.

    With ``basis`` the blocks are spanned by the columns of that unitary.
    """
    if spec.blocks is None:
        raise DimensionError("dephasing_channel needs a DimsSpec with a block decomposition")
    kraus = [_block_projector_full(spec, i, basis) for i in range(len(spec.blocks))]
    return channel_from_kraus(kraus, spec.without_blocks(), spec.without_blocks())


def limitation(e: Channel, spec: DimsSpec, block_index: int, basis: Operator | None = None) -> Channel:
    """ℰ_{B|A_i} = ℰ ∘ Ad_{𝟙_{A_i}}; trace non-increasing in general."""
    if spec.total != e.d_in:
        raise DimensionError(f"Block spec of dimension {spec.total} does not match channel input {e.d_in}")
    projector = channel_from_kraus([_block_projector_full(spec, block_index, basis)], e.in_dims, e.in_dims)
    return compose(e, projector)


# ===== Algebra =====


def apply(e: Channel, x: Operator) -> Operator:
    """ℰ(x); the output is tagged with ``e.out_dims``."""
    if x.side != e.d_in:
        raise DimensionError(f"Channel expects input dimension {e.d_in}, got {x.side}")
    out = (e.superop @ vec(x)).reshape(e.d_out, e.d_out)
    return Operator(out, e.out_dims)


def compose(f: Channel, e: Channel) -> Channel:
    """ℱ ∘ ℰ (apply ``e`` first)."""
    if e.d_out != f.d_in:
        raise DimensionError(f"Cannot compose: first channel outputs {e.d_out}, second expects {f.d_in}")
    kraus = None
    if e.kraus is not None and f.kraus is not None:
        kraus = tuple(kf @ ke for kf in f.kraus for ke in e.kraus)
    return Channel(f.superop @ e.superop, e.in_dims, f.out_dims, kraus)


def adjoint_channel(e: Channel) -> Channel:
    """Heisenberg-picture adjoint ℰ† with respect to the Hilbert–Schmidt inner product."""
    kraus = None if e.kraus is None else tuple(k.conj().T for k in e.kraus)
    return Channel(e.superop.conj().T, e.out_dims, e.in_dims, kraus)


def jamiolkowski_state(e: Channel) -> Operator:
    """𝒟[ℰ] = (id_A ⊗ ℰ)(F_{AA'}) on ``A ⊗ B``."""
    d = e.d_in
    swap = swap_operator(d)
    return apply_local(e.superop, swap, axis=1, out_dim=e.d_out)


def channel_from_jamiolkowski(j: Operator | ArrayLike, in_dim: int) -> Channel:
    """Inverse of :func:`jamiolkowski_state`.

    Raises:
        DimensionError: If the side of ``j`` is not a multiple of ``in_dim``.
    """
    j = as_operator(j)
    if in_dim < 1 or j.side % in_dim:
        raise DimensionError(f"Operator of side {j.side} does not factor as {in_dim} ⊗ d_out")
    d_out = j.side // in_dim
    j4 = j.data.reshape(in_dim, d_out, in_dim, d_out)
    superop = j4.transpose(1, 3, 2, 0).reshape(d_out * d_out, in_dim * in_dim)
    return Channel(superop, DimsSpec((in_dim,)), DimsSpec((d_out,)))


def choi_matrix(e: Channel) -> Operator:
    """Σ_ij |i⟩⟨j| ⊗ ℰ(|i⟩⟨j|); positive semidefinite iff ℰ is completely positive."""
    return Operator(_choi_array(e.superop, e.d_in, e.d_out), DimsSpec((e.d_in, e.d_out)))


# ===== Sampling =====


def random_isometry(d_in: int, d_rows: int, seed: SeedLike) -> ComplexArray:
    """Orthonormalized columns of a seeded complex Gaussian ``d_rows × d_in`` matrix."""
    rng = _rng(seed)
    g = rng.standard_normal((d_rows, d_in)) + 1j * rng.standard_normal((d_rows, d_in))
    q, r = np.linalg.qr(g)
    # Fix column phases so the distribution is Haar and independent of the QR routine.
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_channel(d_in: int, d_out: int, env_dim: int | None = None, seed: SeedLike = None) -> Channel:
    """Random CPTP map from a Stinespring isometry ``A → B ⊗ Env``.

    Raises:
        DimensionError: If ``env_dim · d_out < d_in`` (no isometry exists).
    """
    env = d_out if env_dim is None else env_dim
    if min(d_in, d_out, env) < 1:
        raise DimensionError(f"Dimensions must be >= 1, got d_in={d_in}, d_out={d_out}, env={env}")
    if env * d_out < d_in:
        raise DimensionError(f"No isometry from dimension {d_in} into {d_out}⊗{env}")
    v = random_isometry(d_in, d_out * env, seed)
    logger.debug("random channel %d -> %d with environment %d", d_in, d_out, env)
    return channel_from_isometry(v, d_out, env)


def random_operation(d_in: int, d_out: int, seed: SeedLike = None) -> Channel:
    """Trace non-increasing CP map: a random non-empty subset of a random channel's Kraus operators."""
    rng = _rng(seed)
    full = random_channel(d_in, d_out, d_out + 1, rng)
    assert full.kraus is not None
    n = len(full.kraus)
    keep = rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)
    return channel_from_kraus([full.kraus[k] for k in sorted(keep)], d_in, d_out)


def random_state(d: int, seed: SeedLike = None) -> Operator:
    """Hilbert–Schmidt random density matrix ``GG†/Tr[GG†]`` (full rank almost surely)."""
    if d < 1:
        raise DimensionError(f"State dimension must be >= 1, got {d}")
    rng = _rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return Operator(rho / np.trace(rho).real)


def random_unitary(d: int, seed: SeedLike = None) -> Operator:
    """Haar-random unitary, used to rotate block frames."""
    return Operator(unitary_group.rvs(d, random_state=_rng(seed)) if d > 1 else np.eye(1))
