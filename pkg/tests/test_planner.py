import math

import numpy as np
import pytest

from polcomp.common.errors import NoMixingError, PlannerInputError
from polcomp.planner import (
    FormulaId,
    budget_rows,
    budget_table,
    chain_concentration,
    chain_concentration_samples,
    renyi_known_bounds,
    renyi_unknown_bounds,
    threshold_meaningful,
    tv_known_K,
    tv_known_single,
    tv_unknown,
    weissman,
    weissman_failure_probability,
)


class TestWeissman:
    def test_sample_budget(self):
        budget = weissman(10, 0.1, epsilon=0.2)
        assert budget.formula_id is FormulaId.WEISSMAN
        assert budget.n_real == pytest.approx(1497.866, abs=1e-3)
        assert budget.n_int == 1498

    def test_deviation(self):
        assert weissman(4, 0.05, n=800) == pytest.approx(0.192064, abs=1e-6)

    def test_quadrupled_samples_halve_deviation(self):
        assert weissman(6, 0.1, n=4000) == pytest.approx(weissman(6, 0.1, n=1000) / 2, rel=1e-12)

    def test_failure_probability_inverts_budget(self):
        budget = weissman(10, 0.1, epsilon=0.2)
        assert weissman_failure_probability(10, budget.n_real, 0.2) == pytest.approx(0.1, rel=1e-12)

    @pytest.mark.parametrize("kwargs", [{}, {"n": 10, "epsilon": 0.1}, {"n": 0}, {"epsilon": -1.0}])
    def test_bad_inputs(self, kwargs):
        with pytest.raises(PlannerInputError):
            weissman(4, 0.05, **kwargs)

    def test_alphabet_size(self):
        with pytest.raises(PlannerInputError):
            weissman(1, 0.05, n=10)


class TestChainConcentration:
    def test_tail_bound(self):
        tail = chain_concentration(1.0, 0.1, 1000)
        assert tail.raw == pytest.approx(2 * math.exp(-5))
        assert tail.bound == pytest.approx(0.013476, abs=1e-6)
        assert not tail.vacuous

    def test_zero_deviation_is_vacuous(self):
        tail = chain_concentration(0.5, 0.0, 1000)
        assert tail.raw == 2.0
        assert tail.bound == 1.0
        assert tail.vacuous

    def test_inversion(self):
        budget = chain_concentration_samples(1.0, 0.1, 0.1)
        assert budget.n_real == pytest.approx(2 * math.log(20) / 0.01)
        assert budget.n_int == 600

    def test_no_mixing(self):
        with pytest.raises(NoMixingError):
            chain_concentration(0.0, 0.1, 10)
        with pytest.raises(NoMixingError):
            tv_known_single(0.0, 0.1, 0.1)


class TestKnownModelTv:
    @pytest.mark.parametrize("gamma0, sigma, delta, expected", [(0.5, 0.1, 0.1, 7190), (1.0, 0.2, 0.05, 738)])
    def test_worked_values(self, gamma0, sigma, delta, expected):
        assert tv_known_single(gamma0, sigma, delta).n_int == expected

    def test_halving_threshold_quadruples_budget(self):
        assert tv_known_single(0.3, 0.05, 0.1).n_real == pytest.approx(4 * tv_known_single(0.3, 0.1, 0.1).n_real, rel=1e-12)

    def test_matches_chain_inversion(self):
        rng = np.random.default_rng(0)
        for gamma0, sigma, delta in rng.uniform([0.01, 0.01, 0.01], [1.0, 1.0, 0.99], size=(100, 3)):
            single = tv_known_single(gamma0, sigma, delta).n_real
            chain = chain_concentration_samples(gamma0, sigma / 2, delta).n_real
            assert single == pytest.approx(chain, rel=1e-12)

    def test_k_policies(self):
        budget = tv_known_K(1.0, 0.2, 0.05, 5)
        assert budget.n_int == 923
        assert tv_known_K(1.0, 0.2, 0.05, 10).n_real == pytest.approx(2 * budget.n_real, rel=1e-12)

    def test_k_four_coincides_with_single_policy(self):
        budget = tv_known_K(0.7, 0.15, 0.05, 4)
        assert budget.n_real == pytest.approx(tv_known_single(0.7, 0.15, 0.05).n_real, rel=1e-12)
        assert "coincides_with_single_policy" in budget.flags

    def test_k_one_mismatch_flagged(self):
        budget = tv_known_K(0.7, 0.15, 0.05, 1)
        assert "single_policy_factor_mismatch" in budget.flags
        assert budget.n_real == pytest.approx(tv_known_single(0.7, 0.15, 0.05).n_real / 4, rel=1e-12)

    def test_vacuous_threshold_is_flagged_not_rejected(self):
        budget = tv_known_single(1.0, 0.8, 0.1, n_pairs=4)
        assert "threshold_beyond_meaningful_range" in budget.flags


class TestUnknownModelTv:
    def test_per_pair(self):
        budget = tv_unknown(0.9, 5, 3, 0.1, 0.05, scope="per_pair")
        expected = 8 * 0.81 * 5 / (0.01 * 0.01) * math.log(40)
        assert budget.formula_id is FormulaId.TV_UNKNOWN_PER_PAIR
        assert budget.n_real == pytest.approx(expected, rel=1e-9)
        assert budget.n_real == pytest.approx(1.1952e6, rel=1e-4)

    def test_total_is_per_pair_times_pairs(self):
        per_pair = tv_unknown(0.9, 5, 3, 0.1, 0.05, scope="per_pair")
        total = tv_unknown(0.9, 5, 3, 0.1, 0.05, scope="total")
        assert total.n_real == per_pair.n_real * 15
        assert total.n_real == pytest.approx(1.7928e7, rel=1e-4)

    def test_discount_ratio(self):
        slow = tv_unknown(0.99, 5, 3, 0.1, 0.05).n_real
        fast = tv_unknown(0.9, 5, 3, 0.1, 0.05).n_real
        assert slow / fast == pytest.approx(121.0, rel=1e-9)

    def test_nonpositive_threshold(self):
        with pytest.raises(PlannerInputError):
            tv_unknown(0.9, 5, 3, 0.0, 0.05)


class TestRenyiBudgets:
    def test_known_model_worked_values(self):
        bounds = renyi_known_bounds(1.0, 2.0, 8, 1, 0.1)
        assert bounds.lower.n_real == pytest.approx(13.6948, abs=1e-4)
        assert bounds.upper.n_real == pytest.approx(24.4651, abs=1e-4)
        assert (bounds.lower.n_int, bounds.upper.n_int) == (14, 25)
        assert bounds.lower.formula_id is FormulaId.RENYI_KNOWN_LOWER

    def test_known_model_doubles_with_k(self):
        one = renyi_known_bounds(0.5, 3.0, 10, 1, 0.05)
        two = renyi_known_bounds(0.5, 3.0, 10, 2, 0.05)
        assert two.lower.n_real == pytest.approx(2 * one.lower.n_real, rel=1e-12)
        assert two.upper.n_real == pytest.approx(2 * one.upper.n_real, rel=1e-12)

    def test_pole_at_divergence_floor(self):
        bounds = renyi_known_bounds(1.0, 1.0 + 1e-9, 8, 1, 0.1)
        assert bounds.lower.n_real > 1e9 and bounds.upper.n_real > 1e9
        unknown = renyi_unknown_bounds(0.9, 5, 3, 1.0 + 1e-9, 0.1)
        assert unknown.lower.n_real > 1e9

    def test_known_lower_below_upper(self):
        rng = np.random.default_rng(1)
        for _ in range(500):
            n = int(rng.integers(3, 40))
            sigma2 = float(rng.uniform(1.0001, n - 1e-6))
            bounds = renyi_known_bounds(float(rng.uniform(0.01, 1.0)), sigma2, n, int(rng.integers(1, 6)),
                                        float(rng.uniform(0.01, 0.5)))
            assert bounds.lower.n_real <= bounds.upper.n_real
            assert "lower_exceeds_upper" not in bounds.flags

    def test_unknown_model_worked_values(self):
        bounds = renyi_unknown_bounds(0.9, 5, 3, 2.0, 0.1)
        assert bounds.lower.n_real == pytest.approx(56872.1, rel=1e-6)
        assert bounds.upper.n_real == pytest.approx(97061.7, rel=1e-6)

    def test_unknown_model_rederived_variant(self):
        bounds = renyi_unknown_bounds(0.9, 5, 3, 2.0, 0.1)
        expected = tv_unknown(0.9, 5, 3, math.sqrt(14 * 1.0) / 15, 0.1, scope="total")
        assert bounds.rederived_lower.formula_id is FormulaId.TV_UNKNOWN_TOTAL
        assert bounds.rederived_lower.n_real == pytest.approx(expected.n_real, rel=1e-12)
        assert "rederived" in bounds.rederived_lower.flags
        assert bounds.rederived_upper.n_real > bounds.rederived_lower.n_real

    def test_known_model_rederived_variant(self):
        bounds = renyi_known_bounds(1.0, 2.0, 8, 3, 0.1)
        expected = tv_known_K(1.0, math.sqrt(7.0) / 8, 0.1, 3)
        assert bounds.rederived_lower.n_real == pytest.approx(expected.n_real, rel=1e-12)

    @pytest.mark.parametrize("k", [1, 4])
    def test_known_model_rederived_has_no_factor_flags(self, k):
        bounds = renyi_known_bounds(1.0, 2.0, 8, k, 0.1)
        for budget in (bounds.rederived_lower, bounds.rederived_upper):
            assert "single_policy_factor_mismatch" not in budget.flags
            assert "coincides_with_single_policy" not in budget.flags
            assert "rederived" in budget.flags
        assert "single_policy_factor_mismatch" not in bounds.flags

    @pytest.mark.parametrize("call", [
        lambda: renyi_known_bounds(1.0, 1.0, 8, 1, 0.1),
        lambda: renyi_known_bounds(1.0, 2.0, 2, 1, 0.1),
        lambda: renyi_unknown_bounds(0.9, 2, 3, 2.0, 0.1),
        lambda: renyi_unknown_bounds(0.9, 5, 3, 0.5, 0.1),
    ])
    def test_rejected_inputs(self, call):
        with pytest.raises(PlannerInputError):
            call()


class TestMonotonicity:
    def test_budgets_over_random_grid(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            gamma0 = float(rng.uniform(0.05, 1.0))
            gamma = float(rng.uniform(0.1, 0.95))
            sigma = float(rng.uniform(0.05, 0.5))
            delta = float(rng.uniform(0.01, 0.4))
            sigma2 = float(rng.uniform(1.1, 2.5))
            s, a, k = int(rng.integers(3, 8)), int(rng.integers(1, 4)), int(rng.integers(1, 5))

            assert tv_known_single(gamma0, sigma * 1.1, delta).n_real <= tv_known_single(gamma0, sigma, delta).n_real
            assert tv_known_single(gamma0, sigma, delta * 1.1).n_real <= tv_known_single(gamma0, sigma, delta).n_real
            assert tv_known_K(gamma0, sigma, delta, k + 1).n_real >= tv_known_K(gamma0, sigma, delta, k).n_real
            assert tv_unknown(gamma, s + 1, a, sigma, delta, "total").n_real >= tv_unknown(gamma, s, a, sigma, delta, "total").n_real
            assert tv_unknown(gamma, s, a + 1, sigma, delta, "total").n_real >= tv_unknown(gamma, s, a, sigma, delta, "total").n_real

            known, looser = renyi_known_bounds(gamma0, sigma2, s * a, k, delta), renyi_known_bounds(gamma0, sigma2 + 0.1, s * a, k, delta)
            assert looser.lower.n_real <= known.lower.n_real
            assert looser.upper.n_real <= known.upper.n_real
            unknown = renyi_unknown_bounds(gamma, s, a, sigma2, delta)
            more_actions = renyi_unknown_bounds(gamma, s, a + 1, sigma2, delta)
            assert more_actions.lower.n_real >= unknown.lower.n_real
            assert more_actions.upper.n_real >= unknown.upper.n_real


class TestThresholdMeaningful:
    def test_renyi_at_pair_count(self):
        report = threshold_meaningful(4, sigma2=4.0)
        assert not report.meaningful
        assert report.oracle_limit == 4.0

    def test_tv_limits(self):
        report = threshold_meaningful(4, sigma_tv=0.5)
        assert report.printed_limit == pytest.approx(0.8660254, abs=1e-7)
        assert report.oracle_limit == 0.75
        assert report.meaningful

    def test_disagreement_flagged(self):
        report = threshold_meaningful(4, sigma_tv=0.8)
        assert not report.meaningful
        assert "printed_limit_disagrees" in report.flags

    def test_small_renyi_threshold(self):
        assert threshold_meaningful(2, sigma2=1.5).meaningful

    def test_needs_two_pairs(self):
        with pytest.raises(PlannerInputError):
            threshold_meaningful(1, sigma2=1.5)


def test_budget_table_covers_every_formula():
    table = budget_table(gamma0=0.5, gamma=0.9, sigma_tv=0.1, sigma2=2.0, delta=0.05, s_count=5, a_count=3, k=2)
    assert {budget.formula_id for budget in table} == set(FormulaId)
    rows = budget_rows(table)
    assert len(rows) == len(table)
    assert all(row["n_int"] == math.ceil(row["n_real"]) for row in rows)
