"""Numerical axiom checks for star products.

Each check draws seeded probes (random plus a few structured ones) for every
configured dimension, evaluates a deviation per probe and reports the maximum
together with the probe that produced it. Probes are replayable: evaluators are
looked up by ``Probe.label`` and rebuild every derived object from the stored
ingredients, so :func:`replay_witness` reproduces a reported deviation exactly.

Per-sample generators are seeded with ``[seed, axiom code, dimension, index]``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Mapping
from importlib import resources
from typing import Any

import numpy as np
import yaml

from sotforge.channels import (
    Channel,
    apply,
    compose,
    dephasing_channel,
    full_dephasing,
    identity_channel,
    jamiolkowski_state,
    limitation,
    random_channel,
    random_operation,
    random_state,
    random_unitary,
)
from sotforge.errors import ConditioningError, UnsupportedStarError
from sotforge.reports import (
    MATRIX_AXIOMS,
    AxiomId,
    AxiomReport,
    AxiomStatus,
    Mismatch,
    Probe,
    SuiteConfig,
    SuiteResult,
    classify,
    compare_to_profile,
)
from sotforge.selector import parse_selector
from sotforge.serialization import load_document
from sotforge.stars import (
    FPStar,
    StarProduct,
    chain_star,
    extract_rendering,
    linear_extension,
    star_of_star_map,
    star_on_subsystem,
)
from sotforge.tensor import (
    DimsSpec,
    Operator,
    apply_local,
    basis_projector,
    block_isometry,
    block_projector,
    embed_block,
    identity,
    ket_projector,
    max_abs,
    maximally_mixed,
    partial_trace,
    spectral_decomposition,
    swap_operator,
    vec,
)

logger = logging.getLogger(__name__)

Evaluator = Callable[[StarProduct, Probe], float]
ProbeFactory = Callable[[int, np.random.Generator, int], Probe]

_EVALUATORS: dict[str, Evaluator] = {}

LANDSCAPE_SELECTORS: tuple[str, ...] = (
    "fp",
    "ls",
    "bloom:0.0",
    "bloom:0.3",
    "bloom:0.5",
    "bloom:1.0",
    "cfam:0.7",
    "eta:0.5:0",
    "meanmarg",
    "xiperturbed:fp:xx",
)

ENV_DIM = 2
"""Dimension of the spectator system E in the (E) sub-tests."""


def evaluator(label: str) -> Callable[[Evaluator], Evaluator]:
    def register(fn: Evaluator) -> Evaluator:
        _EVALUATORS[label] = fn
        return fn

    return register


def evaluate(s: StarProduct, probe: Probe) -> float:
    """Deviation of ``s`` on one probe; an ill-conditioned inversion counts as infinite."""
    try:
        fn = _EVALUATORS[probe.label]
    except KeyError:
        raise ValueError(f"No evaluator registered for probe label {probe.label!r}") from None
    try:
        return float(fn(s, probe))
    except ConditioningError as exc:
        logger.debug("probe %s: %s", probe.label, exc)
        return math.inf


def replay_witness(s: StarProduct, witness: Probe | Mapping[str, Any]) -> float:
    """Recompute the deviation recorded for a witness (a Probe or its JSON form)."""
    probe = witness if isinstance(witness, Probe) else Probe.from_dict(witness)
    return evaluate(s, probe)


# ===== Probe ingredients =====


def _sample_rng(cfg: SuiteConfig, axiom: AxiomId, d: int, index: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, axiom.code, d, index])


def plus_state(d: int) -> Operator:
    """|+⟩⟨+| on the first two basis vectors."""
    v = np.zeros(d, dtype=np.complex128)
    v[:2] = 1.0
    return ket_projector(v)


def _random_blocks(rng: np.random.Generator, d: int) -> tuple[int, ...]:
    parts = int(rng.integers(2, d + 1))
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, d), size=parts - 1, replace=False))
    edges = [0, *cuts, d]
    return tuple(b - a for a, b in zip(edges, edges[1:]))


def _lambdas(probe: Probe) -> list[float]:
    return [probe.scalars[f"lambda_{i}"] for i in range(len(probe.blocks or ()))]


def _lambda_scalars(values: Iterable[float]) -> dict[str, float]:
    return {f"lambda_{i}": float(v) for i, v in enumerate(values)}


def _frame(probe: Probe) -> Operator | None:
    return probe.operators.get("frame")


def _block_spec(probe: Probe, d: int) -> DimsSpec:
    assert probe.blocks is not None
    return DimsSpec((d,), probe.blocks)


def _block_state(spec: DimsSpec, lambdas: list[float], frame: Operator | None) -> Operator:
    """Σ λ_i 𝟙_{A_i}/|A_i|."""
    assert spec.blocks is not None
    total = sum(lam * block_projector(spec, i, frame).data / b for i, (lam, b) in enumerate(zip(lambdas, spec.blocks)))
    return Operator(np.asarray(total))


def _block_probe(label: str, rng: np.random.Generator, d: int, rotated: bool) -> Probe:
    blocks = _random_blocks(rng, d)
    operators = {"frame": random_unitary(d, rng)} if rotated else {}
    e0 = random_channel(d, d, seed=rng)
    lambdas = rng.dirichlet(np.ones(len(blocks)))
    return Probe(label, operators, {"e0": e0}, _lambda_scalars(lambdas), blocks)


# ===== Evaluators =====


@evaluator("marginals")
def _marginals(s: StarProduct, probe: Probe) -> float:
    e, rho = probe.channels["e"], probe.operators["rho"]
    out = s.star(e, rho)
    return max(
        max_abs(partial_trace(out, [0]).data - apply(e, rho).data),
        max_abs(partial_trace(out, [1]).data - rho.data),
    )


@evaluator("state_linearity")
def _state_linearity(s: StarProduct, probe: Probe) -> float:
    e = probe.channels["e"]
    rho0, rho1 = probe.operators["rho0"], probe.operators["rho1"]
    alpha = probe.scalars["alpha"]
    mixed = Operator(alpha * rho0.data + (1 - alpha) * rho1.data)
    combo = alpha * s.star(e, rho0).data + (1 - alpha) * s.star(e, rho1).data
    return max_abs(s.star(e, mixed).data - combo)


@evaluator("local_operation")
def _local_operation(s: StarProduct, probe: Probe) -> float:
    e, op, rho = probe.channels["e"], probe.channels["op"], probe.operators["rho"]
    lhs = star_on_subsystem(s, e, apply_local(op.superop, rho, axis=1), axis=0)
    rhs = apply_local(op.superop, star_on_subsystem(s, e, rho, axis=0), axis=2)
    return max_abs(lhs.data - rhs.data)


@evaluator("partial_trace_commutation")
def _partial_trace_commutation(s: StarProduct, probe: Probe) -> float:
    e, rho = probe.channels["e"], probe.operators["rho"]
    lhs = partial_trace(star_on_subsystem(s, e, rho, axis=0), [0])
    rhs = apply_local(e.superop, rho, axis=0, out_dim=e.d_out)
    return max_abs(lhs.data - rhs.data)


@evaluator("composition")
def _composition(s: StarProduct, probe: Probe) -> float:
    chans = [probe.channels[k] for k in ("e", "f", "g") if k in probe.channels]
    rho = probe.operators["rho"]
    chained = chain_star(s, chans, rho)
    reduced = partial_trace(chained, range(1, len(chans)))
    composed = chans[0]
    for nxt in chans[1:]:
        composed = compose(nxt, composed)
    return max_abs(reduced.data - s.star(composed, rho).data)


@evaluator("block_convexity")
def _block_convexity(s: StarProduct, probe: Probe) -> float:
    e0, frame = probe.channels["e0"], _frame(probe)
    spec = _block_spec(probe, e0.d_in)
    assert spec.blocks is not None
    e = compose(e0, dephasing_channel(spec, frame))
    lambdas = _lambdas(probe)
    lhs = s.star(e, _block_state(spec, lambdas, frame)).data
    rhs = sum(
        lam * s.star(limitation(e, spec, i, frame), embed_block(maximally_mixed(b), spec, i, frame)).data
        for i, (lam, b) in enumerate(zip(lambdas, spec.blocks))
    )
    return max_abs(lhs - rhs)


@evaluator("time_reversal")
def _time_reversal(s: StarProduct, probe: Probe) -> float:
    te = s.time_expansion(probe.operators["rho"]).data
    swap = swap_operator(probe.operators["rho"].side).data
    return max_abs(swap @ te @ swap - te)


@evaluator("hermiticity")
def _hermiticity(s: StarProduct, probe: Probe) -> float:
    out = s.star(probe.channels["e"], probe.operators["rho"]).data
    return max_abs(out - out.conj().T)


@evaluator("maximally_mixed")
def _maximally_mixed(s: StarProduct, probe: Probe) -> float:
    e = probe.channels["e"]
    return max_abs(s.star(e, maximally_mixed(e.d_in)).data - jamiolkowski_state(e).data / e.d_in)


@evaluator("subspace_maximally_mixed")
def _subspace_maximally_mixed(s: StarProduct, probe: Probe) -> float:
    e, frame = probe.channels["e"], _frame(probe)
    d = e.d_in
    spec = _block_spec(probe, d)
    index = int(probe.scalars["block"])
    v = block_isometry(spec, index, frame)
    b = v.shape[1]
    lhs = s.star(limitation(e, spec, index, frame), Operator(v @ v.conj().T / b))
    w = np.kron(v, v)
    embedded_swap = Operator(w @ swap_operator(b).data @ w.conj().T, DimsSpec((d, d)))
    rhs = apply_local(e.superop, embedded_swap, axis=1, out_dim=e.d_out).data / b
    return max_abs(lhs.data - rhs)


@evaluator("rendering_reconstruction")
def _rendering_reconstruction(s: StarProduct, probe: Probe) -> float:
    e, rho = probe.channels["e"], probe.operators["rho"]
    theta = extract_rendering(s, rho)
    unit = linear_extension(s, e, identity(rho.side))
    return max_abs(s.star(e, rho).data - apply_local(theta, unit, axis=0).data)


@evaluator("commuting_rendering")
def _commuting_rendering(s: StarProduct, probe: Probe) -> float:
    rho, m = probe.operators["rho"], probe.operators["m"]
    theta = extract_rendering(s, rho)
    d = rho.side
    return max_abs((theta @ vec(m)).reshape(d, d) - rho.data @ m.data)


@evaluator("classical_limit")
def _classical_limit(s: StarProduct, probe: Probe) -> float:
    e0, frame = probe.channels["e0"], _frame(probe)
    spec = _block_spec(probe, e0.d_in)
    e = compose(e0, dephasing_channel(spec, frame))
    rho = _block_state(spec, _lambdas(probe), frame)
    expected = jamiolkowski_state(e).data @ np.kron(rho.data, np.eye(e.d_out))
    return max_abs(s.star(e, rho).data - expected)


@evaluator("associativity")
def _associativity(s: StarProduct, probe: Probe) -> float:
    e, f, rho = probe.channels["e"], probe.channels["f"], probe.operators["rho"]
    nested = star_on_subsystem(s, f, s.star(e, rho), axis=1)
    joint = s.star(star_of_star_map(s, f, e), rho)
    return max_abs(nested.data - joint.data)


@evaluator("rendering_self_adjoint")
def _rendering_self_adjoint(s: StarProduct, probe: Probe) -> float:
    theta = extract_rendering(s, probe.operators["rho"])
    return max_abs(theta - theta.conj().T)


@evaluator("rendering_positive")
def _rendering_positive(s: StarProduct, probe: Probe) -> float:
    theta = extract_rendering(s, probe.operators["rho"])
    lowest = float(np.linalg.eigvalsh(0.5 * (theta + theta.conj().T)).min())
    return max(0.0, -lowest)


# ===== Check runner =====


def _not_applicable(axiom: AxiomId, cfg: SuiteConfig, note: str) -> AxiomReport:
    logger.info("%s: not applicable (%s)", axiom.value, note)
    return AxiomReport(
        axiom, 0, cfg.seed, cfg.tolerance, cfg.fail_threshold, math.nan, AxiomStatus.NOT_APPLICABLE, None, note
    )


def _run_check(
    s: StarProduct,
    cfg: SuiteConfig,
    axiom: AxiomId,
    factory: ProbeFactory,
    structured: Callable[[int], list[Probe]] | None = None,
    requires_linear: bool = False,
) -> AxiomReport:
    if requires_linear and not s.state_linear:
        return _not_applicable(axiom, cfg, f"star '{s.label}' is not state-linear")
    dims = [d for d in cfg.dims if s.supports(d, d)]
    if not dims:
        return _not_applicable(axiom, cfg, f"star '{s.label}' supports none of the dimensions {list(cfg.dims)}")

    worst, witness, count = -math.inf, None, 0
    try:
        for d in dims:
            probes = list(structured(d)) if structured is not None else []
            probes += [factory(d, _sample_rng(cfg, axiom, d, i), i) for i in range(cfg.samples)]
            local = -math.inf
            for probe in probes:
                dev = evaluate(s, probe)
                count += 1
                local = max(local, dev)
                if dev > worst:
                    worst, witness = dev, probe
            logger.debug("%s d=%d: %d probes, max deviation %.3e", axiom.value, d, len(probes), local)
    except UnsupportedStarError as exc:
        return _not_applicable(axiom, cfg, str(exc))

    status = classify(worst, cfg.tolerance, cfg.fail_threshold)
    logger.info("%s: %s (max deviation %.3e over %d probes)", axiom.value, status.value, worst, count)
    return AxiomReport(axiom, count, cfg.seed, cfg.tolerance, cfg.fail_threshold, worst, status, witness)


# ===== Axioms =====


def check_marginals(s: StarProduct, cfg: SuiteConfig) -> AxiomReport:
    """Tr_A[ℰ⋆ρ] = ℰ(ρ) and Tr_B[ℰ⋆ρ] = ρ."""

    def factory(d: int, rng: np.random.Generator, i: int) -> Probe:
        return Probe("marginals", {"rho": random_state(d, rng)}, {"e": random_channel(d, d, seed=rng)})

    def structured(d: int) -> list[Probe]:
        return [
            Probe("marginals", {"rho": basis_projector(d, 0)}, {"e": identity_channel(d)}),
            Probe("marginals", {"rho": plus_state(d)}, {"e": full_dephasing(d)}),
            Probe("marginals", {"rho": maximally_mixed(d)}, {"e": full_dephasing(d)}),
        ]

    return _run_check(s, cfg, AxiomId.MARGINALS, factory, structured)


def check_E(s: StarProduct, cfg: SuiteConfig) -> AxiomReport:
    """State-linearity, commutation with local operations on a spectator, and its partial trace.

    Non-state-linear stars only get the linearity sub-test; its failure already
    decides the axiom.
    """
    linear = s.state_linear

    def factory(d: int, rng: np.random.Generator, i: int) -> Probe:
        sub = i % 3 if linear else 0
        if sub == 0:
            return Probe(
                "state_linearity",
                {"rho0": random_state(d, rng), "rho1": random_state(d, rng)},
                {"e": random_channel(d, d, seed=rng)},
                {"alpha": float(rng.uniform())},
            )
        rho = random_state(d * ENV_DIM, rng).with_dims((d, ENV_DIM))
        e = random_channel(d, d, seed=rng)
        if sub == 1:
            return Probe("local_operation", {"rho": rho}, {"e": e, "op": random_operation(ENV_DIM, ENV_DIM, rng)})
        return Probe("partial_trace_commutation", {"rho": rho}, {"e": e})

    def structured(d: int) -> list[Probe]:
        return [
            Probe(
                "state_linearity",
                {"rho0": basis_projector(d, 0), "rho1": plus_state(d)},
                {"e": identity_channel(d)},
                {"alpha": 0.5},
            )
        ]

    return _run_check(s, cfg, AxiomId.E, factory, structured)


def check_P(s: StarProduct, cfg: SuiteConfig) -> AxiomReport:
    """Tr_B[ℱ⋆(ℰ⋆ρ)] = (ℱ∘ℰ)⋆ρ, alternating with the three-channel form."""

    def factory(d: int, rng: np.random.Generator, i: int) -> Probe:
        names = ("e", "f") if i % 2 == 0 else ("e", "f", "g")
        chans = {k: random_channel(d, d, seed=rng) for k in names}
        return Probe("composition", {"rho": random_state(d, rng)}, chans)

    def structured(d: int) -> list[Probe]:
        return [Probe("composition", {"rho": plus_state(d)}, {"e": identity_channel(d), "f": full_dephasing(d)})]

    return _run_check(s, cfg, AxiomId.P, factory, structured, requires_linear=True)


def check_CC(s: StarProduct, cfg: SuiteConfig) -> AxiomReport:
    """ℰ⋆ρ = Σ λ_i ℰ_{B|A_i}⋆π_{A_i} for ℰ pre-composed with block dephasing.

    Even samples use computational-basis blocks, odd samples Haar-rotated ones.
    """

    def factory(d: int, rng: np.random.Generator, i: int) -> Probe:
        return _block_probe("block_convexity", rng, d, rotated=i % 2 == 1)

    def structured(d: int) -> list[Probe]:
        return [Probe("block_convexity", {}, {"e0": identity_channel(d)}, _lambda_scalars((0.3, 0.7)), (1, d - 1))]

    return _run_check(s, cfg, AxiomId.CC, factory, structured)


def check_T(s: StarProduct, cfg: SuiteConfig) -> AxiomReport:
    """F·(id⋆ρ)·F = id⋆ρ."""

    def factory(d: int, rng: np.random.Generator, i: int) -> Probe:
        return Probe("time_reversal", {"rho": random_state(d, rng)})

    def structured(d: int) -> list[Probe]:
        return [Probe("time_reversal", {"rho": plus_state(d)})]

    return _run_check(s, cfg, AxiomId.T, factory, structured)


def check_H(s: StarProduct, cfg: SuiteConfig) -> AxiomReport:
    """ℰ⋆ρ is Hermitian."""

    def factory(d: int, rng: np.random.Generator, i: int) -> Probe:
        return Probe("hermiticity", {"rho": random_state(d, rng)}, {"e": random_channel(d, d, seed=rng)})

    def structured(d: int) -> list[Probe]:
        return [Probe("hermiticity", {"rho": plus_state(d)}, {"e": identity_channel(d)})]

    return _run_check(s, cfg, AxiomId.H, factory, structured)


def check_J(s: StarProduct, cfg: SuiteConfig, subspace_mode: bool = True) -> AxiomReport:
    """ℰ⋆π_A = 𝒟[ℰ]/|A|.

    ``subspace_mode`` (J) also applies the identity to subspaces A₀ ⊂ A through the
    limitation channel; without it (Ĵ) only full systems are probed.
    """
    axiom = AxiomId.J if subspace_mode else AxiomId.J_HAT

    def factory(d: int, rng: np.random.Generator, i: int) -> Probe:
        e = random_channel(d, d, seed=rng)
        if not subspace_mode or i % 2 == 0:
            return Probe("maximally_mixed", {}, {"e": e})
        blocks = _random_blocks(rng, d)
        index = int(rng.integers(len(blocks)))
        operators = {"frame": random_unitary(d, rng)} if i % 4 == 3 else {}
        return Probe("subspace_maximally_mixed", operators, {"e": e}, {"block": float(index)}, blocks)

    def structured(d: int) -> list[Probe]:
        probes = [Probe("maximally_mixed", {}, {"e": full_dephasing(d)})]
        if subspace_mode:
            probes.append(
                Probe("subspace_maximally_mixed", {}, {"e": identity_channel(d)}, {"block": 1.0}, (1, d - 1))
            )
        return probes

    return _run_check(s, cfg, axiom, factory, structured)


def _commuting_pair(d: int, rng: np.random.Generator) -> dict[str, Operator]:
    """A state with a degenerate spectrum and an operator block-diagonal in its eigenspaces."""
    blocks = _random_blocks(rng, d) if rng.uniform() < 0.7 else (d,)
    values = rng.dirichlet(np.ones(len(blocks)))
    u = random_unitary(d, rng).data
    diag = np.concatenate([np.full(b, v / b) for v, b in zip(values, blocks)])
    rho = Operator((u * diag) @ u.conj().T)
    eig = spectral_decomposition(rho)
    x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    m = sum(p.data @ x @ p.data for p in eig.eigenprojectors)
    return {"rho": rho, "m": Operator(np.asarray(m))}


def check_QC(s: StarProduct, cfg: SuiteConfig) -> AxiomReport:
    """ℰ⋆ρ = (Θ_ρ ⊗ id)(ℰ⋆𝟙) with Θ_ρ(M) = ρM whenever [ρ, M] = 0."""

    def factory(d: int, rng: np.random.Generator, i: int) -> Probe:
        if i % 2 == 0:
            return Probe(
                "rendering_reconstruction", {"rho": random_state(d, rng)}, {"e": random_channel(d, d, seed=rng)}
            )
        return Probe("commuting_rendering", _commuting_pair(d, rng))

    def structured(d: int) -> list[Probe]:
        return [Probe("rendering_reconstruction", {"rho": plus_state(d)}, {"e": identity_channel(d)})]

    return _run_check(s, cfg, AxiomId.QC, factory, structured, requires_linear=True)


def check_classical_limit(s: StarProduct, cfg: SuiteConfig) -> AxiomReport:
    """ℰ⋆ρ = 𝒟[ℰ](ρ⊗𝟙) whenever the two commute."""

    def factory(d: int, rng: np.random.Generator, i: int) -> Probe:
        return _block_probe("classical_limit", rng, d, rotated=i % 2 == 1)

    def structured(d: int) -> list[Probe]:
        weights = np.arange(1, d + 1, dtype=float)
        scalars = _lambda_scalars(weights / weights.sum())
        return [Probe("classical_limit", {}, {"e0": identity_channel(d)}, scalars, (1,) * d)]

    return _run_check(s, cfg, AxiomId.CLASSICAL_LIMIT, factory, structured)


# ===== Derived checks =====


def check_associativity(s: StarProduct, cfg: SuiteConfig) -> AxiomReport:
    """ℱ⋆(ℰ⋆ρ) = (ℱ⋆ℰ)⋆ρ with ℱ⋆ℰ the map σ ↦ ℱ⋆ℰ(σ)."""

    def factory(d: int, rng: np.random.Generator, i: int) -> Probe:
        chans = {"e": random_channel(d, d, seed=rng), "f": random_channel(d, d, seed=rng)}
        return Probe("associativity", {"rho": random_state(d, rng)}, chans)

    return _run_check(s, cfg, AxiomId.ASSOCIATIVITY, factory, requires_linear=True)


def check_qc_self_adjoint(s: StarProduct, cfg: SuiteConfig) -> AxiomReport:
    """Θ_ρ is self-adjoint for the Hilbert–Schmidt inner product."""

    def factory(d: int, rng: np.random.Generator, i: int) -> Probe:
        return Probe("rendering_self_adjoint", {"rho": random_state(d, rng)})

    return _run_check(s, cfg, AxiomId.QC_SA, factory, requires_linear=True)


def check_qc_positive(s: StarProduct, cfg: SuiteConfig) -> AxiomReport:
    """Θ_ρ is positive semidefinite for the Hilbert–Schmidt inner product."""

    def factory(d: int, rng: np.random.Generator, i: int) -> Probe:
        return Probe("rendering_positive", {"rho": random_state(d, rng)})

    return _run_check(s, cfg, AxiomId.QC_PS, factory, requires_linear=True)


def fp_distance(s: StarProduct, e: Channel, rho: Operator) -> float:
    """Entrywise distance between ``s`` and the FP star on one instance."""
    return max_abs(s.star(e, rho).data - FPStar().star(e, rho).data)


# ===== Suites =====

AXIOM_CHECKS: dict[AxiomId, Callable[[StarProduct, SuiteConfig], AxiomReport]] = {
    AxiomId.MARGINALS: check_marginals,
    AxiomId.E: check_E,
    AxiomId.P: check_P,
    AxiomId.CC: check_CC,
    AxiomId.T: check_T,
    AxiomId.H: check_H,
    AxiomId.J: lambda s, cfg: check_J(s, cfg, subspace_mode=True),
    AxiomId.J_HAT: lambda s, cfg: check_J(s, cfg, subspace_mode=False),
    AxiomId.QC: check_QC,
    AxiomId.CLASSICAL_LIMIT: check_classical_limit,
    AxiomId.ASSOCIATIVITY: check_associativity,
    AxiomId.QC_SA: check_qc_self_adjoint,
    AxiomId.QC_PS: check_qc_positive,
}


def describe_star(s: StarProduct) -> dict[str, Any]:
    return {"label": s.label, **s.describe()}


def run_suite(s: StarProduct, cfg: SuiteConfig | None = None) -> SuiteResult:
    """Run every axiom of the matrix, in a fixed order."""
    cfg = cfg or SuiteConfig()
    logger.info("running axiom suite for %s on dims %s", s.label, list(cfg.dims))
    reports = tuple(AXIOM_CHECKS[axiom](s, cfg) for axiom in MATRIX_AXIOMS)
    return SuiteResult(describe_star(s), cfg, reports)


def expectation_table() -> dict[str, dict[str, str]]:
    """The packaged family × axiom landscape, keyed by star label."""
    text = resources.files("sotforge.data").joinpath("expectations.yaml").read_text(encoding="utf-8")
    doc = yaml.safe_load(text)
    return {str(k): {str(a): str(v) for a, v in row.items()} for k, row in doc["families"].items()}


def load_profile(path: str) -> dict[str, str]:
    """An expectation profile ``axiom_id -> status`` from a JSON or YAML file."""
    doc = load_document(path)
    if isinstance(doc, Mapping) and "expectations" in doc:
        doc = doc["expectations"]
    if not isinstance(doc, Mapping):
        raise ValueError(f"Profile {path} must map axiom ids to statuses")
    return {str(k): str(v) for k, v in doc.items()}


def run_landscape(
    cfg: SuiteConfig | None = None, selectors: Iterable[str] = LANDSCAPE_SELECTORS
) -> dict[str, SuiteResult]:
    cfg = cfg or SuiteConfig()
    results = {}
    for text in selectors:
        star = parse_selector(text)
        results[star.label] = run_suite(star, cfg)
    return results


def _max_fp_gap(s: StarProduct, cfg: SuiteConfig, pairs: int, dims: Iterable[int] = (2, 3)) -> float:
    """Largest :func:`fp_distance` over seeded random (channel, state) pairs."""
    gap = 0.0
    for d in dims:
        if not s.supports(d, d):
            return math.inf
        for i in range(pairs):
            rng = np.random.default_rng([cfg.seed, d, i])
            gap = max(gap, fp_distance(s, random_channel(d, d, seed=rng), random_state(d, rng)))
    return gap


def nonuniqueness_demo(cfg: SuiteConfig | None = None) -> dict[str, Any]:
    """The family × axiom matrix with the checks showing FP is the only all-pass row.

    Also records that CFam(0.7) passes the legacy axioms {H, E, P, CC, J, classical
    limit} while differing from FP, and that Bloom(0.5) coincides with FP.
    """
    cfg = cfg or SuiteConfig()
    results = run_landscape(cfg)
    table = expectation_table()
    mismatches: dict[str, list[Mismatch]] = {
        label: compare_to_profile(result.matrix, table[label]) for label, result in results.items() if label in table
    }
    all_pass_rows = [label for label, result in results.items() if result.all_pass]
    # rows that pass everything only because they reproduce FP do not count against uniqueness
    fp_equivalent = [
        label for label in all_pass_rows if label != "fp" and _max_fp_gap(parse_selector(label), cfg, 20) <= 1e-12
    ]
    distinct_all_pass = [label for label in all_pass_rows if label not in fp_equivalent]

    cfam_label = "cfam:0.7"
    legacy = (AxiomId.H, AxiomId.E, AxiomId.P, AxiomId.CC, AxiomId.J, AxiomId.CLASSICAL_LIMIT)
    cfam_legacy_pass = all(results[cfam_label].report(a).passed for a in legacy)
    cfam_distance = fp_distance(parse_selector(cfam_label), identity_channel(2), plus_state(2))

    bloom_gap = _max_fp_gap(parse_selector("bloom:0.5"), cfg, 100)

    ok = (
        distinct_all_pass == ["fp"]
        and not any(mismatches.values())
        and cfam_legacy_pass
        and cfam_distance > cfg.fail_threshold
        and bloom_gap <= 1e-12
    )
    return {
        "config": cfg.to_dict(),
        "families": {label: result.to_dict() for label, result in results.items()},
        "matrix": {label: result.matrix for label, result in results.items()},
        "mismatches": {
            label: [{"axiom_id": m.axiom_id, "expected": m.expected, "actual": m.actual} for m in found]
            for label, found in mismatches.items()
        },
        "all_pass_rows": all_pass_rows,
        "fp_equivalent_rows": fp_equivalent,
        "fp_unique_all_pass": distinct_all_pass == ["fp"],
        "cfam_legacy_pass": cfam_legacy_pass,
        "cfam_fp_distance": cfam_distance,
        "bloom_half_fp_distance": bloom_gap,
        "ok": ok,
    }
