import math

import numpy as np
import pytest

from polcomp.common.errors import NonErgodicChainError
from polcomp.common.models import Cmp, RngSeed, TabularPolicy
from polcomp.divergence import total_variation
from polcomp.mdp_core import induced_chain, occupancy, random_policy, spectral_gap, uniform_policy
from polcomp.sampling import (
    EstimatedModel,
    estimate_transition_model,
    l1_transition_errors,
    occupancy_on_estimate,
    sample_occupancy,
    samples_frame,
    simulation_gap_bound,
)
from tests.conftest import chain_cmp, simplex_policy


def deterministic_cmp() -> Cmp:
    transition = np.zeros((3, 2, 3))
    transition[0, 0, 1] = transition[0, 1, 2] = 1.0
    transition[1, :, 2] = 1.0
    transition[2, 0, 0] = transition[2, 1, 2] = 1.0
    return Cmp(num_states=3, num_actions=2, P=transition, mu=[1.0, 0.0, 0.0], gamma=0.8)


class TestOccupancySampler:
    def test_single_state_action_frequencies(self, single_state_cmp):
        policy = simplex_policy([0.3, 0.7])
        batch = sample_occupancy(single_state_cmp, policy, 10_000, RngSeed(seed=1))
        assert np.all(batch.pairs[:, 0] == 0)
        np.testing.assert_allclose(batch.occupancy.values, [0.3, 0.7], atol=0.03)

    def test_geometric_mode_close_to_exact(self, two_state_cmp, one_action_policy):
        batch = sample_occupancy(two_state_cmp, one_action_policy, 100_000, RngSeed(seed=2))
        exact = occupancy(two_state_cmp, one_action_policy)
        assert total_variation(batch.occupancy, exact) <= 0.02
        assert batch.occupancy.kind == "empirical"
        assert batch.occupancy.sample_count == 100_000

    def test_same_seed_same_samples(self, reversible_cmp):
        policy = uniform_policy(reversible_cmp)
        first = sample_occupancy(reversible_cmp, policy, 500, RngSeed(seed=3, stream=4))
        second = sample_occupancy(reversible_cmp, policy, 500, RngSeed(seed=3, stream=4))
        other = sample_occupancy(reversible_cmp, policy, 500, RngSeed(seed=3, stream=5))
        np.testing.assert_array_equal(first.pairs, second.pairs)
        assert not np.array_equal(first.pairs, other.pairs)

    def test_env_steps_per_sample(self, reversible_cmp):
        n = 100_000
        batch = sample_occupancy(reversible_cmp, uniform_policy(reversible_cmp), n, RngSeed(seed=4))
        gamma = reversible_cmp.gamma
        standard_error = math.sqrt(gamma) / (1.0 - gamma) / math.sqrt(n)
        assert abs(batch.env_steps / n - 1.0 / (1.0 - gamma)) <= 4.0 * standard_error

    def test_stationary_mode_records_burn_in(self, reversible_cmp):
        policy = uniform_policy(reversible_cmp)
        gamma0 = spectral_gap(induced_chain(reversible_cmp, policy)).gamma0
        batch = sample_occupancy(reversible_cmp, policy, 1000, RngSeed(seed=5), mode="stationary")
        assert batch.burn_in == math.ceil(10.0 / gamma0)
        assert batch.env_steps == batch.burn_in + 1000
        assert batch.mode == "stationary"

    def test_stationary_mode_needs_mixing(self):
        c = chain_cmp(np.eye(2), [0.5, 0.5], 0.9)
        with pytest.raises(NonErgodicChainError):
            sample_occupancy(c, TabularPolicy(pi=np.ones((2, 1))), 10,
                             RngSeed(seed=6), mode="stationary")

    def test_rejects_empty_batch(self, two_state_cmp, one_action_policy):
        with pytest.raises(ValueError):
            sample_occupancy(two_state_cmp, one_action_policy, 0, RngSeed(seed=7))

    def test_samples_frame_columns(self, two_state_cmp, one_action_policy):
        batches = [(r, sample_occupancy(two_state_cmp, one_action_policy, 5, RngSeed(seed=8, stream=r))) for r in range(2)]
        frame = samples_frame(batches)
        assert list(frame.columns) == ["replicate", "step", "s", "a"]
        assert len(frame) == 10
        assert samples_frame([]).empty

    @pytest.mark.audit
    def test_geometric_sampler_is_exact(self, reversible_cmp):
        policy = random_policy(reversible_cmp, RngSeed(seed=10))
        exact = occupancy(reversible_cmp, policy).values
        estimates = np.array([
            sample_occupancy(reversible_cmp, policy, 10_000, RngSeed(seed=11, stream=r)).occupancy.values
            for r in range(200)
        ])
        standard_error = estimates.std(axis=0, ddof=1) / math.sqrt(200)
        assert np.all(np.abs(estimates.mean(axis=0) - exact) <= 4.0 * standard_error + 1e-12)


class TestGenerativeModel:
    def test_deterministic_model_is_recovered(self):
        c = deterministic_cmp()
        estimated = estimate_transition_model(c, 3, RngSeed(seed=1))
        np.testing.assert_array_equal(estimated.p_hat, c.transition)
        policy = random_policy(c, RngSeed(seed=2))
        np.testing.assert_allclose(occupancy_on_estimate(estimated, policy).values, occupancy(c, policy).values)

    def test_weissman_union_bound(self, reversible_cmp):
        estimated = estimate_transition_model(reversible_cmp, 10_000, RngSeed(seed=3))
        assert l1_transition_errors(reversible_cmp, estimated).max() <= math.sqrt(2 * 5 * math.log(2 * 15 / 0.05) / 1e4)

    def test_same_seed_same_estimate(self, reversible_cmp):
        first = estimate_transition_model(reversible_cmp, 50, RngSeed(seed=4))
        second = estimate_transition_model(reversible_cmp, 50, RngSeed(seed=4))
        np.testing.assert_array_equal(first.p_hat, second.p_hat)

    def test_exact_estimate_has_zero_gap(self, reversible_cmp):
        estimated = EstimatedModel(p_hat=reversible_cmp.transition, counts_per_pair=1, source=reversible_cmp)
        policy = uniform_policy(reversible_cmp)
        assert simulation_gap_bound(reversible_cmp, estimated, policy) == 0.0
        np.testing.assert_allclose(
            occupancy_on_estimate(estimated, policy).values, occupancy(reversible_cmp, policy).values
        )

    def test_gap_bound_direct_product(self):
        c = chain_cmp([[0.5, 0.5], [0.5, 0.5]], [1.0, 0.0], 0.9)
        estimated = EstimatedModel(p_hat=[[[0.55, 0.45]], [[0.45, 0.55]]], counts_per_pair=20, source=c)
        policy = TabularPolicy(pi=np.ones((2, 1)))
        assert simulation_gap_bound(c, estimated, policy) == pytest.approx(0.9)

    def test_simulation_lemma_on_random_instances(self, random_cmps):
        for i, c in enumerate(random_cmps(100, seed=5)):
            policy = random_policy(c, RngSeed(seed=6, stream=i))
            estimated = estimate_transition_model(c, 1000, RngSeed(seed=7, stream=i))
            gap = total_variation(occupancy_on_estimate(estimated, policy), occupancy(c, policy))
            assert gap <= simulation_gap_bound(c, estimated, policy) + 1e-10
