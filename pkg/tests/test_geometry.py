import math

import numpy as np
import pytest

from polcomp.common.errors import InfeasibleBranchError, SupportViolationError
from polcomp.common.models import RngSeed
from polcomp.divergence import renyi2, total_variation
from polcomp.geometry import (
    OracleBudget,
    SimplexPoint,
    certificate,
    closed_form_tv,
    family_checks,
    lemma4_family,
    lemma5_family,
    lemma6_family,
    make_point,
    polytope_faces,
    project_to_simplex,
    tv_extrema_oracle,
    vertex_rep,
)

SMALL_BUDGET = OracleBudget(restarts=2, iterations=40, grid_resolution=60, grid_max_n=4)


class TestPoints:
    def test_uniform_and_vertex(self):
        assert np.allclose(make_point(4, "uniform").values, 0.25)
        vertex = make_point(4, "vertex", index=3)
        assert vertex.values.tolist() == [0.0, 0.0, 1.0, 0.0]
        assert vertex.label == "vertex(3)"

    def test_vertex_index_is_one_based(self):
        with pytest.raises(ValueError):
            make_point(4, "vertex", index=0)
        with pytest.raises(ValueError):
            make_point(4, "vertex", index=5)

    def test_random_point_is_reproducible(self):
        a = make_point(6, "random", seed=RngSeed(seed=3))
        b = make_point(6, "random", seed=RngSeed(seed=3))
        assert np.array_equal(a.values, b.values)
        assert a.values.sum() == pytest.approx(1.0, abs=1e-12)

    def test_simplex_validation(self):
        with pytest.raises(ValueError):
            SimplexPoint(values=[0.6, 0.6])
        with pytest.raises(ValueError):
            SimplexPoint(values=[1.5, -0.5])


class TestFamilies:
    def test_lemma4_plus(self):
        point = lemma4_family(4, 2.0, "+")
        assert point.values[0] == pytest.approx(0.6830127, abs=1e-7)
        assert np.allclose(point.values[1:], 0.1056624, atol=1e-7)
        assert renyi2(point, make_point(4)) == pytest.approx(2.0, abs=1e-12)

    def test_lemma4_at_pair_count_is_vertex(self):
        assert lemma4_family(5, 5.0, "+").values == pytest.approx([1.0, 0.0, 0.0, 0.0, 0.0], abs=1e-12)

    def test_lemma4_minus_branch(self):
        with pytest.raises(InfeasibleBranchError, match="coordinate 1"):
            lemma4_family(4, 2.0, "-")
        point = lemma4_family(4, 1.2, "-")
        assert renyi2(point, make_point(4)) == pytest.approx(1.2, abs=1e-12)

    def test_sigma2_at_floor_rejected(self):
        with pytest.raises(InfeasibleBranchError):
            lemma4_family(4, 1.0)
        with pytest.raises(InfeasibleBranchError):
            vertex_rep(4, 0.5)

    def test_vertex_rep(self):
        rep = vertex_rep(4, 2.0)
        assert rep.values == pytest.approx([0.5, 1 / 6, 1 / 6, 1 / 6])
        assert renyi2(make_point(4, "vertex", index=1), rep) == pytest.approx(2.0, abs=1e-12)

    def test_lemma5_branches(self):
        rep = vertex_rep(5, 1.5)
        for branch in ("vertex", "interior"):
            point = lemma5_family(5, 1.5, branch)
            assert renyi2(point, rep) == pytest.approx(1.5, abs=1e-12)
            assert total_variation(point, rep) == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_lemma5_interior_needs_small_threshold(self):
        with pytest.raises(InfeasibleBranchError):
            lemma5_family(5, 2.5, "interior")
        assert lemma5_family(5, 2.5, "vertex").values[0] == 1.0

    def test_lemma6(self):
        assert lemma6_family(4, 2.0, "+").values == pytest.approx([0.5, 0.5, 0.0, 0.0], abs=1e-12)
        with pytest.raises(InfeasibleBranchError):
            lemma6_family(4, 2.0, "-")
        point = lemma6_family(10, 1.5, "+")
        assert renyi2(point, vertex_rep(10, 1.5)) == pytest.approx(1.5, abs=1e-12)

    def test_lemma6_never_feasible_at_three_pairs(self):
        for sigma2 in (1.1, 1.5, 2.0, 2.9):
            for sign in ("+", "-"):
                with pytest.raises(InfeasibleBranchError):
                    lemma6_family(3, sigma2, sign)

    def test_closed_form(self):
        tv = closed_form_tv(4, 2.0)
        assert tv["max_tv"] == pytest.approx(math.sqrt(3) / 4)
        assert tv["loosest_tv"] == pytest.approx(0.5)
        assert tv["min_tv"] == pytest.approx(1.0 / 3.0)

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 8, 10])
    @pytest.mark.parametrize("sigma2", [1.1, 1.5, 2.0, 3.0])
    def test_family_identities(self, n, sigma2):
        checks = family_checks(n, sigma2)
        feasible = [check for check in checks if check.feasible]
        assert feasible
        for check in feasible:
            assert check.renyi2_residual <= 1e-10, check.label
            assert check.tv_residual <= 1e-12, check.label
        for check in checks:
            if not check.feasible:
                assert "leaves the simplex" in check.reason

    def test_polytope_faces(self):
        assert polytope_faces(3) == [3, 3, 1]
        for n in range(1, 9):
            assert sum(polytope_faces(n)) == 2 ** n - 1


def test_renyi_to_uniform_never_exceeds_pair_count():
    rng = np.random.default_rng(4)
    for n in range(2, 13):
        uniform = make_point(n)
        points = rng.dirichlet(np.full(n, 0.3), size=2000)
        assert max(renyi2(x, uniform) for x in points) <= n + 1e-9
        assert renyi2(make_point(n, "vertex", index=n), uniform) == pytest.approx(n)


class TestProjection:
    def test_points_on_simplex_are_fixed(self):
        x = np.array([0.2, 0.3, 0.5])
        assert project_to_simplex(x) == pytest.approx(x)

    def test_clips_to_vertex(self):
        assert project_to_simplex(np.array([2.0, 0.0])) == pytest.approx([1.0, 0.0])

    def test_rows(self):
        v = np.random.default_rng(5).normal(size=(50, 6))
        x = project_to_simplex(v)
        assert np.all(x >= 0)
        assert np.allclose(x.sum(axis=1), 1.0)
        assert np.allclose(project_to_simplex(v + 3.0), x)


class TestOracle:
    def test_extrema_around_vertex_rep(self):
        result = tv_extrema_oracle(vertex_rep(4, 2.0), 2.0, SMALL_BUDGET, RngSeed(seed=1))
        assert result.tv_max >= 0.5 - 1e-6
        assert result.tv_min <= 1.0 / 3.0 + 1e-6
        assert result.grid_used
        rep = vertex_rep(4, 2.0)
        for x in (result.argmax, result.argmin):
            assert renyi2(np.array(x), rep) == pytest.approx(2.0, abs=1e-6)

    def test_near_floor_sphere_is_tiny(self):
        result = tv_extrema_oracle(make_point(4), 1.0 + 1e-9, SMALL_BUDGET, RngSeed(seed=2))
        assert result.tv_max <= 1e-3
        assert result.tv_min <= 1e-3

    def test_reproducible(self):
        a = tv_extrema_oracle(make_point(6), 2.0, SMALL_BUDGET, RngSeed(seed=9))
        b = tv_extrema_oracle(make_point(6), 2.0, SMALL_BUDGET, RngSeed(seed=9))
        assert not a.grid_used
        assert a == b

    def test_representative_must_have_full_support(self):
        with pytest.raises(SupportViolationError) as error:
            tv_extrema_oracle([0.5, 0.5, 0.0], 1.5, SMALL_BUDGET)
        assert error.value.offending_indices == [2]

    def test_threshold_at_floor(self):
        with pytest.raises(InfeasibleBranchError):
            tv_extrema_oracle(make_point(3), 1.0, SMALL_BUDGET)


class TestCertificate:
    def test_four_pairs(self):
        cert = certificate(4, 2.0, RngSeed(seed=11), SMALL_BUDGET)
        assert cert.passed
        assert cert.comparisons["oracle_max_ge_max_tv"]
        assert cert.comparisons["oracle_max_ge_loosest_tv"]
        assert cert.comparisons["oracle_min_le_min_tv"]
        # середина ребра (1/2, 1/2, 0, 0) дает TV = 1/2 > sqrt(3)/4
        assert "max_tv_not_global_maximum" in cert.flags
        row = cert.row()
        assert row["failed"] is False
        assert row["oracle_exceeds_max_tv"] is True

    def test_three_pairs_without_lemma6(self):
        cert = certificate(3, 1.5, RngSeed(seed=12), SMALL_BUDGET)
        assert cert.passed
        assert "lemma6_infeasible" in cert.flags

    def test_without_grid(self):
        cert = certificate(6, 5.0, RngSeed(seed=13), SMALL_BUDGET)
        assert cert.passed
        assert not cert.oracle["uniform"].grid_used

    @pytest.mark.parametrize("n, sigma2", [(2, 1.5), (4, 1.0), (4, 4.0)])
    def test_rejected_inputs(self, n, sigma2):
        with pytest.raises(ValueError):
            certificate(n, sigma2, budget=SMALL_BUDGET)
