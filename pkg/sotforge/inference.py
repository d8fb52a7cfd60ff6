"""Conditioning on spacetime states.

The symmetric bloom ``Θ^S_ρ(M) = ½{ρ, M}`` renders a conditional state into a joint
one; its inverse turns a bipartite state ``ρ_AB`` into the conditional state
``ρ_{B|A} = ((Θ^S_{ρ_A})⁻¹ ⊗ id)(ρ_AB)`` and from there into the belief
propagation map ``ℬ(σ) = Tr_A[(σ ⊗ 𝟙) ρ_{B|A}]``, whose Jamiołkowski state is
``ρ_{B|A}`` itself. Feeding ``ℬ`` and ``ρ_A`` back into the FP star returns ``ρ_AB``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from sotforge.channels import Channel, adjoint_channel, apply, channel_from_jamiolkowski
from sotforge.constants import GROUPING_TOL, KERNEL_LEAK_TOL, SINGULAR_CUTOFF_REL, STATE_TOL
from sotforge.errors import DimensionError, HermiticityError, SingularMarginalError
from sotforge.stars import FPStar
from sotforge.tensor import (
    ComplexArray,
    EigenSystem,
    Operator,
    apply_local,
    max_abs,
    partial_trace,
    permute_subsystems,
    psd_sqrt,
    spectral_decomposition,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConditionalState:
    """ρ_{B|A} together with the marginal it was conditioned on."""

    operator: Operator
    marginal: Operator
    support_dim: int


@dataclass(frozen=True)
class _BloomInverse:
    superop: ComplexArray
    kernel_pairs: tuple[tuple[int, int], ...]
    eigen: EigenSystem
    support_dim: int


def _bloom_inverse(rho: Operator, grouping_tol: float, singular_cutoff: float | None) -> _BloomInverse:
    eig = spectral_decomposition(rho, grouping_tol)
    if eig.eigenvalues[-1] < -STATE_TOL:
        raise HermiticityError(f"Marginal must be positive semidefinite; smallest eigenvalue {eig.eigenvalues[-1]:.3e}")
    largest = max(abs(v) for v in eig.eigenvalues)
    cutoff = SINGULAR_CUTOFF_REL * largest if singular_cutoff is None else singular_cutoff

    d = rho.side
    superop = np.zeros((d * d, d * d), dtype=np.complex128)
    kernel: list[tuple[int, int]] = []
    for i, (lam_i, p_i) in enumerate(zip(eig.eigenvalues, eig.eigenprojectors)):
        for j, (lam_j, p_j) in enumerate(zip(eig.eigenvalues, eig.eigenprojectors)):
            if lam_i + lam_j > cutoff:
                superop += (2.0 / (lam_i + lam_j)) * np.kron(p_i.data, p_j.data.T)
            else:
                kernel.append((i, j))
    support = sum(m for lam, m in zip(eig.eigenvalues, eig.multiplicities) if 2 * lam > cutoff)
    return _BloomInverse(superop, tuple(kernel), eig, support)


def _kernel_leaks(inv: _BloomInverse, x: Operator, axis: int) -> list[tuple[int, int, float]]:
    """Largest entry of (P_i ⊗ 𝟙) x (P_j ⊗ 𝟙) on each kernel pair, where it exceeds tolerance."""
    leaks = []
    for i, j in inv.kernel_pairs:
        p_i, p_j = inv.eigen.eigenprojectors[i].data, inv.eigen.eigenprojectors[j].data
        piece = apply_local(np.kron(p_i, p_j.T), x, axis=axis)
        leak = max_abs(piece.data)
        if leak > KERNEL_LEAK_TOL:
            leaks.append((i, j, leak))
    return leaks


def symmetric_bloom_inverse(
    rho: Operator, sigma: Operator, grouping_tol: float = GROUPING_TOL, singular_cutoff: float | None = None
) -> Operator:
    """Σ_ij 2/(λ_i+λ_j) P_i σ P_j over eigenspace pairs with λ_i + λ_j above the cutoff.

    Inverts ``M ↦ ½{ρ, M}`` on the support of ρ.

    Raises:
        SingularMarginalError: If σ has weight on a kernel-to-kernel eigenspace pair.
        HermiticityError: If ρ is not Hermitian positive semidefinite.
    """
    if sigma.side != rho.side:
        raise DimensionError(f"σ of side {sigma.side} does not match ρ of side {rho.side}")
    inv = _bloom_inverse(rho, grouping_tol, singular_cutoff)
    leaks = _kernel_leaks(inv, sigma.with_dims((sigma.side,)), axis=0)
    if leaks:
        raise SingularMarginalError(leaks)
    out = (inv.superop @ sigma.data.reshape(-1)).reshape(rho.side, rho.side)
    return Operator(out, sigma.dims)


def _require_bipartite(rho_ab: Operator) -> tuple[int, int]:
    if len(rho_ab.dims) != 2:
        raise DimensionError(f"Expected a bipartite operator, got dims {rho_ab.dims.subsystem_dims}")
    d_a, d_b = rho_ab.dims.subsystem_dims
    return d_a, d_b


def _require_full_support(inv: _BloomInverse) -> None:
    if inv.kernel_pairs:
        raise SingularMarginalError([(i, j, 0.0) for i, j in inv.kernel_pairs])


def conditional_state(
    rho_ab: Operator,
    grouping_tol: float = GROUPING_TOL,
    singular_cutoff: float | None = None,
    strict: bool = False,
) -> ConditionalState:
    """ρ_{B|A} = ((Θ^S_{ρ_A})⁻¹ ⊗ id_B)(ρ_AB).

    A rank-deficient ρ_A is handled on its support; only weight of ρ_AB on
    kernel-to-kernel blocks is an error. With ``strict`` any kernel of ρ_A is
    refused.

    Raises:
        SingularMarginalError: Names the offending eigenspace pairs of ρ_A.
    """
    _require_bipartite(rho_ab)
    marginal = partial_trace(rho_ab, [1])
    inv = _bloom_inverse(marginal, grouping_tol, singular_cutoff)
    if strict:
        _require_full_support(inv)
    leaks = _kernel_leaks(inv, rho_ab, axis=0)
    if leaks:
        raise SingularMarginalError(leaks)
    if inv.support_dim < marginal.side:
        logger.debug("conditioning on a rank-%d marginal of dimension %d", inv.support_dim, marginal.side)
    operator = apply_local(inv.superop, rho_ab, axis=0)
    return ConditionalState(operator, marginal, inv.support_dim)


def belief_propagation(rho_ab: Operator, grouping_tol: float = GROUPING_TOL) -> Channel:
    """ℬ(σ_A) = Tr_A[(σ_A ⊗ 𝟙_B) ρ_{B|A}]; not necessarily completely positive."""
    d_a, _ = _require_bipartite(rho_ab)
    cond = conditional_state(rho_ab, grouping_tol)
    return channel_from_jamiolkowski(cond.operator, d_a)


def roundtrip_check(rho_ab: Operator) -> float:
    """‖ℬ ⋆_FP ρ_A − ρ_AB‖_max.

    Raises:
        SingularMarginalError: If ρ_A is rank-deficient (the kernel pairs are listed
            with zero leak).
    """
    _require_bipartite(rho_ab)
    marginal = partial_trace(rho_ab, [1])
    _require_full_support(_bloom_inverse(marginal, GROUPING_TOL, None))
    rebuilt = FPStar().star(belief_propagation(rho_ab), marginal)
    return max_abs(rebuilt.data - rho_ab.data)


def bayes_inverse(rho_ab: Operator, grouping_tol: float = GROUPING_TOL) -> ConditionalState:
    """ρ_{A|B}, conditioning on B; the operator lives on ``B ⊗ A``."""
    _require_bipartite(rho_ab)
    return conditional_state(permute_subsystems(rho_ab, [1, 0]), grouping_tol)


def fp_retrodiction(e: Channel, rho: Operator) -> Channel:
    """The map B → A obtained by conditioning the FP state over time on its output."""
    joint = FPStar().star(e, rho)
    swapped = permute_subsystems(joint, [1, 0])
    return channel_from_jamiolkowski(conditional_state(swapped).operator, e.d_out)


def _inverse_sqrt(x: Operator) -> ComplexArray:
    eig = spectral_decomposition(x)
    largest = max(abs(v) for v in eig.eigenvalues)
    out = np.zeros((x.side, x.side), dtype=np.complex128)
    for lam, p in zip(eig.eigenvalues, eig.eigenprojectors):
        if lam > SINGULAR_CUTOFF_REL * largest:
            out += p.data / np.sqrt(lam)
    return out


def petz_recovery(e: Channel, rho: Operator) -> Channel:
    """Petz map σ ↦ √ρ ℰ†(ℰ(ρ)^{-1/2} σ ℰ(ρ)^{-1/2}) √ρ, the retrodiction of the LS star.

    Agrees with :func:`fp_retrodiction` when ρ and the channel are classical, and
    differs in general.
    """
    if rho.side != e.d_in:
        raise DimensionError(f"State of dimension {rho.side} does not match channel input {e.d_in}")
    root = psd_sqrt(rho).data
    inv_root = _inverse_sqrt(apply(e, rho))
    superop = np.kron(root, root.T) @ adjoint_channel(e).superop @ np.kron(inv_root, inv_root.T)
    return Channel(superop, e.out_dims, e.in_dims)
