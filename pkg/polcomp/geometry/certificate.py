from typing import Callable, List, Optional

from loguru import logger

from polcomp.common.config import config
from polcomp.common.errors import InfeasibleBranchError
from polcomp.common.models import RngSeed
from polcomp.divergence import euclidean_distance, renyi2, total_variation
from .families import (
    closed_form_tv,
    lemma4_family,
    lemma5_family,
    lemma6_family,
    make_point,
    vertex_rep,
)
from .models import FamilyCheck, GeometryCertificate, OracleBudget, SimplexPoint
from .oracle import tv_extrema_oracle

TV_TOLERANCE = 1e-12
ORACLE_SLACK = 1e-6


def _check_family(
    build: Callable[[], SimplexPoint],
    label: str,
    representative: SimplexPoint,
    sigma2: float,
    closed_form: str,
    expected_tv: float
) -> FamilyCheck:
    try:
        point = build()
    except InfeasibleBranchError as e:
        return FamilyCheck(label=label, representative=representative.label, feasible=False, reason=str(e))

    tv = total_variation(point, representative)
    return FamilyCheck(
        label=label,
        representative=representative.label,
        feasible=True,
        renyi2_residual=abs(renyi2(point, representative) - sigma2),
        tv=tv,
        closed_form=closed_form,
        tv_residual=abs(tv - expected_tv),
        euclidean=euclidean_distance(point, representative),
    )


def family_checks(n: int, sigma2: float) -> List[FamilyCheck]:
    """Все точки семейств с их представителями и ожидаемыми значениями TV"""
    tv = closed_form_tv(n, sigma2)
    uniform = make_point(n, "uniform")
    rep = vertex_rep(n, sigma2)
    return [
        _check_family(lambda: lemma4_family(n, sigma2, "+"), "lemma4(+)", uniform, sigma2, "max_tv", tv["max_tv"]),
        _check_family(lambda: lemma4_family(n, sigma2, "-"), "lemma4(-)", uniform, sigma2, "max_tv", tv["max_tv"]),
        _check_family(lambda: lemma5_family(n, sigma2, "vertex"), "lemma5(vertex)", rep, sigma2, "loosest_tv", tv["loosest_tv"]),
        _check_family(lambda: lemma5_family(n, sigma2, "interior"), "lemma5(interior)", rep, sigma2, "loosest_tv", tv["loosest_tv"]),
        _check_family(lambda: lemma6_family(n, sigma2, "+"), "lemma6(+)", rep, sigma2, "min_tv", tv["min_tv"]),
        _check_family(lambda: lemma6_family(n, sigma2, "-"), "lemma6(-)", rep, sigma2, "min_tv", tv["min_tv"]),
    ]


def certificate(
    n: int,
    sigma2: float,
    seed: Optional[RngSeed] = None,
    budget: Optional[OracleBudget] = None,
    jobs: int = 1
) -> GeometryCertificate:
    """
    Замкнутые значения TV, проверки семейств и оракул вокруг uniform и vertex_rep.
    Глобальные утверждения о экстремумах только записываются в comparisons.
    """
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    if not 1.0 < sigma2 < n:
        raise ValueError(f"sigma2 must lie in (1, {n}), got {sigma2}")

    seed = seed or RngSeed(seed=config.default_seed)
    closed_form = closed_form_tv(n, sigma2)
    checks = family_checks(n, sigma2)

    oracle = {
        "uniform": tv_extrema_oracle(make_point(n, "uniform"), sigma2, budget, seed, jobs),
        "vertex_rep": tv_extrema_oracle(vertex_rep(n, sigma2), sigma2, budget, seed.with_stream(seed.stream + 1), jobs),
    }

    comparisons = {
        "oracle_max_ge_max_tv": oracle["uniform"].tv_max >= closed_form["max_tv"] - ORACLE_SLACK,
        "oracle_exceeds_max_tv": oracle["uniform"].tv_max > closed_form["max_tv"] + ORACLE_SLACK,
        "oracle_max_ge_loosest_tv": oracle["vertex_rep"].tv_max >= closed_form["loosest_tv"] - ORACLE_SLACK,
        "oracle_min_le_min_tv": oracle["vertex_rep"].tv_min <= closed_form["min_tv"] + ORACLE_SLACK,
        "oracle_below_min_tv": oracle["vertex_rep"].tv_min < closed_form["min_tv"] - ORACLE_SLACK,
    }

    family_tolerance = config.oracle_config["family_tolerance"]
    passed = all(
        check.renyi2_residual <= family_tolerance and check.tv_residual <= TV_TOLERANCE
        for check in checks if check.feasible
    )

    flags = []
    if comparisons["oracle_exceeds_max_tv"]:
        flags.append("max_tv_not_global_maximum")
    if comparisons["oracle_below_min_tv"]:
        flags.append("min_tv_not_global_minimum")
    if not any(check.feasible for check in checks if check.label.startswith("lemma6")):
        flags.append("lemma6_infeasible")
    if not passed:
        logger.warning(f"Geometry certificate failed for n={n}, sigma2={sigma2}")

    return GeometryCertificate(
        n=n,
        sigma2=sigma2,
        closed_form=closed_form,
        family_checks=checks,
        oracle=oracle,
        comparisons=comparisons,
        passed=passed,
        flags=flags,
    )
