"""Operator arithmetic with subsystem-aware tensor structure.

Index conventions shared by every module:

* composite basis ``|i_A, i_A'⟩ ↦ i_A·d_A' + i_A'`` (left subsystem varies slowest,
  the ``numpy.kron`` convention);
* superoperators act on row-major ``vec``: the elementary matrix ``|i⟩⟨j|`` has flat
  index ``i·d + j`` (see :func:`vec_index`), so ``vec(A X B) = (A ⊗ Bᵀ) vec(X)``.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import TypeAlias

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from sotforge.constants import GROUPING_TOL, HERMITIAN_TOL
from sotforge.errors import DimensionError, HermiticityError

ComplexArray: TypeAlias = NDArray[np.complex128]


def max_abs(a: ArrayLike) -> float:
    """Max-entry absolute norm, the norm used in every tolerance statement."""
    arr = np.asarray(a)
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(arr)))


@dataclass(frozen=True)
class DimsSpec:
    """Ordered subsystem dimensions with an optional direct-sum split of one subsystem.

    Args:
        subsystem_dims: Dimension of each tensor factor, left to right.
        blocks: Block sizes ``A = ⊕ A_i`` of subsystem ``block_axis``.
        block_axis: Which subsystem the block decomposition refers to.
    """

    subsystem_dims: tuple[int, ...]
    blocks: tuple[int, ...] | None = None
    block_axis: int = 0

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.subsystem_dims)
        object.__setattr__(self, "subsystem_dims", dims)
        if not dims:
            raise DimensionError("DimsSpec needs at least one subsystem")
        if any(d < 1 for d in dims):
            raise DimensionError(f"Subsystem dimensions must be >= 1, got {dims}")
        if self.blocks is not None:
            blocks = tuple(int(b) for b in self.blocks)
            object.__setattr__(self, "blocks", blocks)
            if not 0 <= self.block_axis < len(dims):
                raise DimensionError(f"block_axis {self.block_axis} out of range for dims {dims}")
            if any(b < 1 for b in blocks):
                raise DimensionError(f"Block sizes must be >= 1, got {blocks}")
            if sum(blocks) != dims[self.block_axis]:
                raise DimensionError(
                    f"Blocks {blocks} sum to {sum(blocks)}, subsystem {self.block_axis} has dim "
                    f"{dims[self.block_axis]}"
                )

    @property
    def total(self) -> int:
        return math.prod(self.subsystem_dims)

    def __len__(self) -> int:
        return len(self.subsystem_dims)

    def block_range(self, index: int) -> range:
        """Contiguous index range of block ``index`` inside the designated subsystem."""
        if self.blocks is None:
            raise DimensionError("DimsSpec has no block decomposition")
        if not 0 <= index < len(self.blocks):
            raise DimensionError(f"Block index {index} out of range for blocks {self.blocks}")
        start = sum(self.blocks[:index])
        return range(start, start + self.blocks[index])

    def with_blocks(self, blocks: Sequence[int], block_axis: int = 0) -> DimsSpec:
        return DimsSpec(self.subsystem_dims, tuple(blocks), block_axis)

    def without_blocks(self) -> DimsSpec:
        return DimsSpec(self.subsystem_dims)


@dataclass(frozen=True, eq=False)
class Operator:
    """Complex square matrix tagged with its subsystem structure.

    The underlying array is copied and made read-only on construction.
    """

    data: ComplexArray
    dims: DimsSpec = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        arr = np.array(self.data, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"Operator must be a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DimensionError("Operator entries must be finite")
        dims = self.dims if self.dims is not None else DimsSpec((arr.shape[0],))
        if not isinstance(dims, DimsSpec):
            dims = DimsSpec(tuple(dims))
        if dims.total != arr.shape[0]:
            raise DimensionError(f"dims {dims.subsystem_dims} do not match matrix side {arr.shape[0]}")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "dims", dims)

    @property
    def side(self) -> int:
        return int(self.data.shape[0])

    def dag(self) -> Operator:
        return Operator(self.data.conj().T, self.dims)

    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return max_abs(self.data - self.data.conj().T) <= tol

    def with_dims(self, dims: DimsSpec | Sequence[int]) -> Operator:
        return Operator(self.data, dims if isinstance(dims, DimsSpec) else DimsSpec(tuple(dims)))

    def __add__(self, other: Operator) -> Operator:
        return Operator(self.data + _data_of(other), self.dims)

    def __sub__(self, other: Operator) -> Operator:
        return Operator(self.data - _data_of(other), self.dims)

    def __neg__(self) -> Operator:
        return Operator(-self.data, self.dims)

    def __mul__(self, scalar: complex) -> Operator:
        return Operator(self.data * scalar, self.dims)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> Operator:
        return Operator(self.data / scalar, self.dims)

    def __matmul__(self, other: Operator) -> Operator:
        return Operator(self.data @ _data_of(other), self.dims)

    def __repr__(self) -> str:
        return f"Operator(dims={self.dims.subsystem_dims}, side={self.side})"


def _data_of(x: Operator | ArrayLike) -> ComplexArray:
    if isinstance(x, Operator):
        return x.data
    return np.asarray(x, dtype=np.complex128)


def as_operator(x: Operator | ArrayLike, dims: DimsSpec | Sequence[int] | None = None) -> Operator:
    """Wrap an array (or re-tag an Operator) with the given dims."""
    if isinstance(x, Operator):
        return x if dims is None else x.with_dims(dims)
    spec = dims if isinstance(dims, DimsSpec) or dims is None else DimsSpec(tuple(dims))
    return Operator(np.asarray(x, dtype=np.complex128), spec)  # type: ignore[arg-type]


@dataclass(frozen=True)
class EigenSystem:
    """Spectral decomposition ``h = Σ λ_i P_i`` with degenerate eigenvalues merged.

    ``eigenvalues`` are in descending order and ``eigenprojectors[i]`` is the
    projector onto the eigenspace of ``eigenvalues[i]``.
    """

    eigenvalues: tuple[float, ...]
    eigenprojectors: tuple[Operator, ...]
    grouping_tol: float
    multiplicities: tuple[int, ...]

    def reconstruct(self) -> Operator:
        dims = self.eigenprojectors[0].dims
        total = sum((lam * p.data for lam, p in zip(self.eigenvalues, self.eigenprojectors, strict=True)))
        return Operator(np.asarray(total), dims)

    def __len__(self) -> int:
        return len(self.eigenvalues)


# ===== Construction helpers =====


def identity(d: int) -> Operator:
    return Operator(np.eye(d, dtype=np.complex128))


def maximally_mixed(d: int) -> Operator:
    """π_d = 𝟙/d."""
    return Operator(np.eye(d, dtype=np.complex128) / d)


def basis_projector(d: int, i: int) -> Operator:
    """|i⟩⟨i| on a d-dimensional system."""
    if not 0 <= i < d:
        raise DimensionError(f"Basis index {i} out of range for dimension {d}")
    p = np.zeros((d, d), dtype=np.complex128)
    p[i, i] = 1.0
    return Operator(p)


def ket_projector(vector: ArrayLike) -> Operator:
    """|ψ⟩⟨ψ| for a (not necessarily normalised) vector ψ, normalised first."""
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise DimensionError("Cannot build a projector from the zero vector")
    v = v / norm
    return Operator(np.outer(v, v.conj()))


def elementary(d: int, i: int, j: int) -> ComplexArray:
    """The matrix unit |i⟩⟨j|."""
    e = np.zeros((d, d), dtype=np.complex128)
    e[i, j] = 1.0
    return e


# ===== Tensor structure =====


def kron(x: Operator, y: Operator) -> Operator:
    """Tensor product with ``x`` owning the slower-varying index."""
    dims = x.dims.subsystem_dims + y.dims.subsystem_dims
    if x.dims.blocks is not None:
        spec = DimsSpec(dims, x.dims.blocks, x.dims.block_axis)
    elif y.dims.blocks is not None:
        spec = DimsSpec(dims, y.dims.blocks, y.dims.block_axis + len(x.dims))
    else:
        spec = DimsSpec(dims)
    return Operator(np.kron(x.data, y.data), spec)


def kron_all(ops: Iterable[Operator]) -> Operator:
    ops = list(ops)
    if not ops:
        raise DimensionError("kron_all needs at least one operator")
    out = ops[0]
    for op in ops[1:]:
        out = kron(out, op)
    return out


def _validate_axes(dims: DimsSpec, axes: Iterable[int]) -> list[int]:
    axes = sorted(set(int(a) for a in axes))
    for a in axes:
        if not 0 <= a < len(dims):
            raise DimensionError(f"Subsystem index {a} invalid for dims {dims.subsystem_dims}")
    return axes


def partial_trace(x: Operator, traced_subsystems: Iterable[int]) -> Operator:
    """Trace out the listed subsystems; the rest keep their order.

    Tracing everything yields the 1×1 matrix ``[Tr x]``.
    """
    dims = x.dims
    traced = _validate_axes(dims, traced_subsystems)
    n = len(dims)
    keep = [k for k in range(n) if k not in traced]
    tensor = x.data.reshape(dims.subsystem_dims * 2)
    in_labels = list(range(n)) + [k if k in traced else n + k for k in range(n)]
    out_labels = keep + [n + k for k in keep]
    reduced = np.einsum(tensor, in_labels, out_labels)
    if not keep:
        return Operator(np.asarray(reduced).reshape(1, 1))
    kept_dims = tuple(dims.subsystem_dims[k] for k in keep)
    side = math.prod(kept_dims)
    if dims.blocks is not None and dims.block_axis in keep:
        spec = DimsSpec(kept_dims, dims.blocks, keep.index(dims.block_axis))
    else:
        spec = DimsSpec(kept_dims)
    return Operator(reduced.reshape(side, side), spec)


def swap_operator(d: int) -> Operator:
    """F = Σ_ij |ij⟩⟨ji| on ``d ⊗ d``."""
    if d < 1:
        raise DimensionError(f"Swap dimension must be >= 1, got {d}")
    eye4 = np.eye(d * d, dtype=np.complex128).reshape(d, d, d, d)
    return Operator(eye4.transpose(0, 1, 3, 2).reshape(d * d, d * d), DimsSpec((d, d)))


def permute_subsystems(x: Operator, order: Sequence[int]) -> Operator:
    """Reorder tensor factors; ``order[k]`` is the old index of the new k-th factor."""
    dims = x.dims.subsystem_dims
    n = len(dims)
    if sorted(order) != list(range(n)):
        raise DimensionError(f"{list(order)} is not a permutation of {n} subsystems")
    tensor = x.data.reshape(dims * 2)
    perm = list(order) + [n + k for k in order]
    new_dims = tuple(dims[k] for k in order)
    side = x.side
    return Operator(tensor.transpose(perm).reshape(side, side), DimsSpec(new_dims))


def vec_index(i: int, j: int, d: int) -> int:
    """Flat index of |i⟩⟨j| in the row-major elementary basis."""
    if not (0 <= i < d and 0 <= j < d):
        raise DimensionError(f"Matrix index ({i}, {j}) out of range for dimension {d}")
    return i * d + j


def vec(x: Operator | ArrayLike) -> ComplexArray:
    return _data_of(x).reshape(-1)


def unvec(v: ArrayLike, d: int) -> ComplexArray:
    return np.asarray(v, dtype=np.complex128).reshape(d, d)


def left_multiplication(a: ArrayLike) -> ComplexArray:
    """Superoperator of M ↦ aM."""
    a = np.asarray(a, dtype=np.complex128)
    return np.kron(a, np.eye(a.shape[0]))


def right_multiplication(a: ArrayLike) -> ComplexArray:
    """Superoperator of M ↦ Ma."""
    a = np.asarray(a, dtype=np.complex128)
    return np.kron(np.eye(a.shape[0]), a.T)


def apply_local(superop: ArrayLike, x: Operator, axis: int, out_dim: int | None = None) -> Operator:
    """Apply a superoperator to subsystem ``axis`` of ``x`` (identity elsewhere).

    Args:
        superop: ``(d_out², d_in²)`` matrix in the :func:`vec_index` basis.
        x: Operator whose subsystem ``axis`` has dimension ``d_in``.
        axis: Target subsystem.
        out_dim: ``d_out``; inferred from the superoperator shape when omitted.

    Returns:
        Operator with subsystem ``axis`` replaced by a ``d_out`` factor.
    """
    s = np.asarray(superop, dtype=np.complex128)
    dims = x.dims.subsystem_dims
    _validate_axes(x.dims, [axis])
    d_in = dims[axis]
    if out_dim is None:
        out_dim = math.isqrt(s.shape[0])
    if s.shape != (out_dim * out_dim, d_in * d_in):
        raise DimensionError(
            f"Superoperator shape {s.shape} does not map dimension {d_in} to {out_dim} on subsystem {axis}"
        )
    n = len(dims)
    tensor = x.data.reshape(dims * 2)
    s4 = s.reshape(out_dim, out_dim, d_in, d_in)
    out = np.tensordot(s4, tensor, axes=([2, 3], [axis, n + axis]))
    out = np.moveaxis(out, [0, 1], [axis, n + axis])
    new_dims = dims[:axis] + (out_dim,) + dims[axis + 1 :]
    side = math.prod(new_dims)
    spec = x.dims if out_dim == d_in else DimsSpec(new_dims)
    return Operator(out.reshape(side, side), spec)


# ===== Spectral structure =====


def require_hermitian(h: Operator, tol: float = HERMITIAN_TOL, what: str = "Operator") -> None:
    deviation = max_abs(h.data - h.data.conj().T)
    if deviation > tol:
        raise HermiticityError(f"{what} is not Hermitian: max |h - h†| = {deviation:.3e} > {tol:.1e}")


def spectral_decomposition(h: Operator, grouping_tol: float = GROUPING_TOL) -> EigenSystem:
    """Eigenvalues (descending) and eigenprojectors of a Hermitian operator.

    Consecutive eigenvalues within ``grouping_tol`` of the first member of their
    group are merged; the group's eigenvalue is their mean.

    Raises:
        HermiticityError: If ``h`` is not Hermitian within ``HERMITIAN_TOL``.
    """
    require_hermitian(h)
    herm = 0.5 * (h.data + h.data.conj().T)
    values, vectors = scipy.linalg.eigh(herm)
    order = np.argsort(values)[::-1]
    values = values[order]
    vectors = vectors[:, order]

    groups: list[list[int]] = []
    for k, lam in enumerate(values):
        if groups and abs(values[groups[-1][0]] - lam) <= grouping_tol:
            groups[-1].append(k)
        else:
            groups.append([k])

    eigenvalues = tuple(float(np.mean(values[g])) for g in groups)
    projectors = tuple(Operator(vectors[:, g] @ vectors[:, g].conj().T, h.dims) for g in groups)
    return EigenSystem(eigenvalues, projectors, grouping_tol, tuple(len(g) for g in groups))


def psd_sqrt(rho: Operator) -> Operator:
    """Principal square root of a Hermitian PSD operator (negative rounding clipped)."""
    require_hermitian(rho, what="State")
    values, vectors = scipy.linalg.eigh(0.5 * (rho.data + rho.data.conj().T))
    root = np.sqrt(np.clip(values, 0.0, None))
    return Operator((vectors * root) @ vectors.conj().T, rho.dims)


# ===== Direct-sum blocks =====


def block_isometry(spec: DimsSpec, block_index: int, basis: Operator | None = None) -> ComplexArray:
    """Isometry V (d × b_i) onto block ``block_index`` of the designated subsystem.

    With ``basis`` (a unitary U), the block is spanned by the corresponding columns
    of U instead of computational basis vectors.
    """
    indices = spec.block_range(block_index)
    d = spec.subsystem_dims[spec.block_axis]
    if basis is None:
        frame = np.eye(d, dtype=np.complex128)
    else:
        frame = basis.data
        if frame.shape != (d, d):
            raise DimensionError(f"Basis of side {frame.shape[0]} does not match subsystem dim {d}")
    return np.ascontiguousarray(frame[:, indices.start : indices.stop])


def block_projector(spec: DimsSpec, block_index: int, basis: Operator | None = None) -> Operator:
    """𝟙_{A_i} on the designated subsystem (as a single-system operator)."""
    v = block_isometry(spec, block_index, basis)
    d = spec.subsystem_dims[spec.block_axis]
    return Operator(v @ v.conj().T, DimsSpec((d,)))


def embed_block(x: Operator, spec: DimsSpec, block_index: int, basis: Operator | None = None) -> Operator:
    """Place an operator on block A_i into the full space, zeros elsewhere.

    ``x`` acts on the designated subsystem's block tensored with the remaining
    subsystems of ``spec`` (in order).
    """
    v = block_isometry(spec, block_index, basis)
    factors = [np.eye(d, dtype=np.complex128) for d in spec.subsystem_dims]
    factors[spec.block_axis] = v
    full = factors[0]
    for f in factors[1:]:
        full = np.kron(full, f)
    if x.side != full.shape[1]:
        raise DimensionError(
            f"Operator side {x.side} does not match block {block_index} of size {v.shape[1]} "
            f"(embedded side {full.shape[1]})"
        )
    return Operator(full @ x.data @ full.conj().T, spec)
