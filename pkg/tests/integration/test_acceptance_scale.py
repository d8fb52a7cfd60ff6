"""Seeded sweeps of the core identities at full sample counts."""

import numpy as np
import pytest

from sotforge.channels import compose, random_channel, random_state, transpose_map
from sotforge.inference import belief_propagation, roundtrip_check
from sotforge.stars import bloom, chain_star, fp
from sotforge.tensor import ket_projector, max_abs, partial_trace
from tests.conftest import EXACT_TOLERANCE, STRUCTURAL_TOLERANCE, SUITE_TOLERANCE

ROUNDTRIP_STATES = 100
BLOOM_PAIRS = 100
CHAIN_TRIPLES = 50


@pytest.mark.slow
@pytest.mark.timeout(600)
@pytest.mark.integration
class TestAcceptanceScale:
    @pytest.mark.parametrize("dims", [(2, 2), (2, 3)])
    def test_roundtrip_on_full_rank_states(self, dims: tuple[int, int]) -> None:
        d_a, d_b = dims
        worst = 0.0
        for seed in range(ROUNDTRIP_STATES):
            joint = random_state(d_a * d_b, np.random.default_rng([seed, d_a, d_b])).with_dims(dims)
            worst = max(worst, roundtrip_check(joint))
        assert worst <= SUITE_TOLERANCE

    def test_bell_state_conditions_to_transpose(self) -> None:
        bell = ket_projector(np.array([1, 0, 0, 1]) / np.sqrt(2)).with_dims((2, 2))
        channel = belief_propagation(bell)
        assert not channel.is_cp
        assert max_abs(channel.superop - transpose_map(2).superop) <= STRUCTURAL_TOLERANCE

    @pytest.mark.parametrize("d", [2, 3])
    def test_symmetric_bloom_matches_fp(self, d: int) -> None:
        worst = 0.0
        for seed in range(BLOOM_PAIRS):
            rng = np.random.default_rng([seed, d])
            e, rho = random_channel(d, d, seed=rng), random_state(d, rng)
            worst = max(worst, max_abs(bloom(0.5).star(e, rho).data - fp().star(e, rho).data))
        assert worst <= EXACT_TOLERANCE

    def test_three_step_chain_marginals(self) -> None:
        """Every pair of time slices of 𝒢⋆(ℱ⋆(ℰ⋆ρ)) that starts at A is a two-time FP state."""
        star = fp()
        for seed in range(CHAIN_TRIPLES):
            rng = np.random.default_rng(seed)
            e, f, g = (random_channel(2, 2, seed=rng) for _ in range(3))
            rho = random_state(2, rng)
            chain = chain_star(star, [e, f, g], rho)
            assert chain.dims.subsystem_dims == (2, 2, 2, 2)
            pairs = {
                (2, 3): e,
                (1, 3): compose(f, e),
                (1, 2): compose(g, compose(f, e)),
            }
            for traced, channel in pairs.items():
                deviation = max_abs(partial_trace(chain, list(traced)).data - star.star(channel, rho).data)
                assert deviation <= SUITE_TOLERANCE, f"seed {seed}, traced {traced}: {deviation:.3e}"

    def test_two_step_chain_marginals(self) -> None:
        star = fp()
        for seed in range(CHAIN_TRIPLES):
            rng = np.random.default_rng([seed, 2])
            e, f = random_channel(2, 2, seed=rng), random_channel(2, 2, seed=rng)
            rho = random_state(2, rng)
            chain = chain_star(star, [e, f], rho)
            assert max_abs(partial_trace(chain, [2]).data - star.star(e, rho).data) <= SUITE_TOLERANCE
            assert max_abs(partial_trace(chain, [1]).data - star.star(compose(f, e), rho).data) <= SUITE_TOLERANCE
