"""
Формулы объема выборки и концентрационные оценки.

Все формулы реализованы ровно в напечатанном виде, каждая помечена своим
formula_id. Известные несогласованности (множитель 8 против 2K, |S|- против
|SA|-членов в оценках Реньи) не исправляются, а попадают во flags.
"""

import math
from typing import Dict, List, Literal, Optional

from loguru import logger

from polcomp.common.errors import NoMixingError, PlannerInputError
from polcomp.geometry.families import closed_form_tv
from .models import FormulaId, MeaningfulReport, RenyiBudgets, SampleBudget, TailBound

Scope = Literal["per_pair", "total"]

VACUOUS_THRESHOLD = "threshold_beyond_meaningful_range"


def _check_delta(delta: float):
    if not 0.0 < delta < 1.0:
        raise PlannerInputError(f"delta must lie in (0, 1), got {delta}")


def _check_positive(name: str, value: float):
    if not value > 0:
        raise PlannerInputError(f"{name} must be positive, got {value}")


def _check_gamma0(gamma0: float):
    if gamma0 == 0:
        raise NoMixingError("gamma0 = 0: the induced chain does not mix")
    if not 0.0 < gamma0 <= 1.0:
        raise PlannerInputError(f"gamma0 must lie in (0, 1], got {gamma0}")


def _check_gamma(gamma: float):
    if not 0.0 < gamma < 1.0:
        raise PlannerInputError(f"gamma must lie in (0, 1), got {gamma}")


def _log_term(delta: float) -> float:
    return math.log(2.0 / delta)


def _meaningful_flags(n_pairs: Optional[int], **threshold) -> List[str]:
    if n_pairs is None or n_pairs < 2:
        return []
    report = threshold_meaningful(n_pairs, **threshold)
    if report.meaningful:
        return []
    logger.warning(f"Threshold {report.threshold} is vacuous for {n_pairs} state-action pairs")
    return [VACUOUS_THRESHOLD]


# Лемма 1 (Вейсман)

def weissman(a: int, delta: float, *, n: Optional[float] = None, epsilon: Optional[float] = None):
    """
    L1-отклонение эмпирического распределения на a исходах.
    С n возвращает eps = sqrt(2a ln(2/delta) / n), с epsilon - SampleBudget.
    """
    if (n is None) == (epsilon is None):
        raise PlannerInputError("exactly one of n or epsilon must be given")
    if a < 2:
        raise PlannerInputError(f"alphabet size must be at least 2, got {a}")
    _check_delta(delta)

    if n is not None:
        _check_positive("n", n)
        return math.sqrt(2.0 * a * _log_term(delta) / n)

    _check_positive("epsilon", epsilon)
    return SampleBudget(
        formula_id=FormulaId.WEISSMAN,
        inputs={"a": a, "delta": delta, "epsilon": epsilon},
        n_real=2.0 * a * _log_term(delta) / epsilon ** 2,
    )


def weissman_failure_probability(a: int, n: float, epsilon: float) -> float:
    """Лемма 1, решенная относительно delta; обрезается до 1"""
    if a < 2:
        raise PlannerInputError(f"alphabet size must be at least 2, got {a}")
    _check_positive("n", n)
    _check_positive("epsilon", epsilon)
    return min(1.0, 2.0 * math.exp(-n * epsilon ** 2 / (2.0 * a)))


# Лемма 2 (цепи Маркова)

def chain_concentration(gamma0: float, epsilon: float, n: float) -> TailBound:
    """2 exp(-gamma0 eps^2 N / (2 (2 - gamma0)))"""
    _check_gamma0(gamma0)
    if epsilon < 0:
        raise PlannerInputError(f"epsilon must be nonnegative, got {epsilon}")
    if n < 0:
        raise PlannerInputError(f"n must be nonnegative, got {n}")

    raw = 2.0 * math.exp(-gamma0 * epsilon ** 2 * n / (2.0 * (2.0 - gamma0)))
    return TailBound(raw=raw, bound=min(raw, 1.0), vacuous=raw >= 1.0)


def chain_concentration_samples(gamma0: float, epsilon: float, delta: float) -> SampleBudget:
    """Обращение леммы 2: N = 2 (2 - gamma0) ln(2/delta) / (gamma0 eps^2)"""
    _check_gamma0(gamma0)
    _check_positive("epsilon", epsilon)
    _check_delta(delta)
    return SampleBudget(
        formula_id=FormulaId.CHAIN_CONCENTRATION,
        inputs={"gamma0": gamma0, "epsilon": epsilon, "delta": delta},
        n_real=2.0 * (2.0 - gamma0) * _log_term(delta) / (gamma0 * epsilon ** 2),
    )


# Известная модель, TV

def tv_known_single(gamma0: float, sigma_tv: float, delta: float, n_pairs: Optional[int] = None) -> SampleBudget:
    """N = 8 (2 - gamma0) / (gamma0 sigma^2) ln(2/delta)"""
    _check_gamma0(gamma0)
    _check_positive("sigma_tv", sigma_tv)
    _check_delta(delta)
    inputs = {"gamma0": gamma0, "sigma_tv": sigma_tv, "delta": delta}
    if n_pairs is not None:
        inputs["n_pairs"] = n_pairs
    return SampleBudget(
        formula_id=FormulaId.TV_KNOWN_SINGLE,
        inputs=inputs,
        n_real=8.0 * (2.0 - gamma0) / (gamma0 * sigma_tv ** 2) * _log_term(delta),
        flags=_meaningful_flags(n_pairs, sigma_tv=sigma_tv),
    )


def tv_known_K(gamma0: float, sigma_tv: float, delta: float, k: int, n_pairs: Optional[int] = None) -> SampleBudget:
    """N = 2K (2 - gamma0) / (gamma0 sigma^2) ln(2/delta)"""
    _check_gamma0(gamma0)
    _check_positive("sigma_tv", sigma_tv)
    _check_delta(delta)
    if k < 1:
        raise PlannerInputError(f"K must be at least 1, got {k}")

    budget = _k_policy_budget(gamma0, sigma_tv, delta, k, n_pairs)
    if k == 1:
        budget.flags.append("single_policy_factor_mismatch")
        logger.warning("K = 1: factor 2K = 2 disagrees with the single-policy factor 8")
    elif k == 4:
        budget.flags.append("coincides_with_single_policy")
    return budget


def _k_policy_budget(gamma0: float, sigma_tv: float, delta: float, k: int, n_pairs: Optional[int]) -> SampleBudget:
    # Без флагов сравнения множителей 2K и 8
    inputs = {"gamma0": gamma0, "sigma_tv": sigma_tv, "delta": delta, "K": k}
    if n_pairs is not None:
        inputs["n_pairs"] = n_pairs
    return SampleBudget(
        formula_id=FormulaId.TV_KNOWN_K,
        inputs=inputs,
        n_real=2.0 * k * (2.0 - gamma0) / (gamma0 * sigma_tv ** 2) * _log_term(delta),
        flags=_meaningful_flags(n_pairs, sigma_tv=sigma_tv),
    )


# Неизвестная модель, TV

def tv_unknown(
    gamma: float,
    s_count: int,
    a_count: int,
    sigma_tv: float,
    delta: float,
    scope: Scope = "per_pair"
) -> SampleBudget:
    """
    На пару: N = 8 gamma^2 |S| / ((1 - gamma)^2 sigma^2) ln(2/delta).
    Всего: то же, умноженное на |S||A|.
    """
    _check_gamma(gamma)
    _check_positive("sigma_tv", sigma_tv)
    _check_delta(delta)
    if s_count < 1 or a_count < 1:
        raise PlannerInputError(f"state and action counts must be positive, got {s_count}, {a_count}")

    per_pair = 8.0 * gamma ** 2 * s_count / ((1.0 - gamma) ** 2 * sigma_tv ** 2) * _log_term(delta)
    inputs = {"gamma": gamma, "s_count": s_count, "a_count": a_count, "sigma_tv": sigma_tv, "delta": delta}
    flags = _meaningful_flags(s_count * a_count, sigma_tv=sigma_tv)

    if scope == "per_pair":
        return SampleBudget(formula_id=FormulaId.TV_UNKNOWN_PER_PAIR, inputs=inputs, n_real=per_pair, flags=flags)
    if scope == "total":
        return SampleBudget(
            formula_id=FormulaId.TV_UNKNOWN_TOTAL,
            inputs=inputs,
            n_real=per_pair * (s_count * a_count),
            flags=flags,
        )
    raise PlannerInputError(f"unknown scope: {scope}")


# Порог Реньи

def _check_renyi(sigma2: float):
    if not sigma2 > 1.0:
        raise PlannerInputError(f"sigma2 must exceed the divergence floor 1, got {sigma2}")


def _rederived_flags(sigma2: float, n_pairs: int) -> List[str]:
    # max_tv выходит за предел TV при sigma2 > n
    return ["rederived"] if sigma2 <= n_pairs else ["rederived", VACUOUS_THRESHOLD]


def renyi_known_bounds(gamma0: float, sigma2: float, n_pairs: int, k: int, delta: float) -> RenyiBudgets:
    """Напечатанные нижняя и верхняя оценки для известной модели плюс версия через TV"""
    _check_gamma0(gamma0)
    _check_renyi(sigma2)
    _check_delta(delta)
    if n_pairs <= 2:
        raise PlannerInputError(f"n_pairs must be at least 3, got {n_pairs}")
    if k < 1:
        raise PlannerInputError(f"K must be at least 1, got {k}")

    n = n_pairs
    log_term = _log_term(delta)
    flags = _meaningful_flags(n, sigma2=sigma2)
    inputs = {"gamma0": gamma0, "sigma2": sigma2, "n_pairs": n, "K": k, "delta": delta}

    lower = k * (2.0 - gamma0) * n ** 2 / (2.0 * gamma0 * (sigma2 - 1.0) * (n - 1)) * log_term
    upper = k * (2.0 - gamma0) * sigma2 * (n - 1) ** 2 / (2.0 * gamma0 * (sigma2 - 1.0) ** 2 * (n - 2)) * log_term

    report_flags = list(flags)
    if lower > upper:
        report_flags.append("lower_exceeds_upper")
        logger.warning(f"Renyi known-model lower budget {lower:.6g} exceeds upper {upper:.6g}")

    tv = closed_form_tv(n, sigma2)
    rederived_lower = _k_policy_budget(gamma0, tv["max_tv"], delta, k, None)
    rederived_upper = _k_policy_budget(gamma0, tv["min_tv"], delta, k, None)

    return RenyiBudgets(
        lower=SampleBudget(formula_id=FormulaId.RENYI_KNOWN_LOWER, inputs=inputs, n_real=lower, flags=flags),
        upper=SampleBudget(formula_id=FormulaId.RENYI_KNOWN_UPPER, inputs=inputs, n_real=upper, flags=flags),
        rederived_lower=_as_rederived(rederived_lower, sigma2, n, tv["max_tv"]),
        rederived_upper=_as_rederived(rederived_upper, sigma2, n, tv["min_tv"]),
        flags=report_flags,
    )


def renyi_unknown_bounds(gamma: float, s_count: int, a_count: int, sigma2: float, delta: float) -> RenyiBudgets:
    """
    Напечатанные оценки для неизвестной модели в |S|-членах
    и версия через tv_unknown в |SA|-членах.
    """
    _check_gamma(gamma)
    _check_renyi(sigma2)
    _check_delta(delta)
    if s_count <= 2:
        raise PlannerInputError(f"s_count must be at least 3, got {s_count}")
    if a_count < 1:
        raise PlannerInputError(f"a_count must be positive, got {a_count}")

    s, a = s_count, a_count
    log_term = _log_term(delta)
    flags = _meaningful_flags(s * a, sigma2=sigma2)
    inputs = {"gamma": gamma, "s_count": s, "a_count": a, "sigma2": sigma2, "delta": delta}
    scale = gamma ** 2 / (2.0 * (1.0 - gamma) ** 2)

    lower = scale * s ** 4 * a / ((sigma2 - 1.0) * (s - 1)) * log_term
    upper = scale * sigma2 * (s - 1) ** 2 * s ** 2 * a / ((sigma2 - 1.0) ** 2 * (s - 2)) * log_term

    report_flags = list(flags)
    if lower > upper:
        report_flags.append("lower_exceeds_upper")
        logger.warning(f"Renyi unknown-model lower budget {lower:.6g} exceeds upper {upper:.6g}")

    n = s * a
    tv = closed_form_tv(n, sigma2)
    rederived_lower = tv_unknown(gamma, s, a, tv["max_tv"], delta, scope="total")
    rederived_upper = tv_unknown(gamma, s, a, tv["min_tv"], delta, scope="total")

    return RenyiBudgets(
        lower=SampleBudget(formula_id=FormulaId.RENYI_UNKNOWN_LOWER, inputs=inputs, n_real=lower, flags=flags),
        upper=SampleBudget(formula_id=FormulaId.RENYI_UNKNOWN_UPPER, inputs=inputs, n_real=upper, flags=flags),
        rederived_lower=_as_rederived(rederived_lower, sigma2, n, tv["max_tv"]),
        rederived_upper=_as_rederived(rederived_upper, sigma2, n, tv["min_tv"]),
        flags=report_flags,
    )


def _as_rederived(budget: SampleBudget, sigma2: float, n_pairs: int, sigma_tv: float) -> SampleBudget:
    inputs = {**budget.inputs, "sigma2": sigma2, "sigma_tv": sigma_tv, "n_pairs": n_pairs}
    flags = [f for f in budget.flags if f != VACUOUS_THRESHOLD] + _rederived_flags(sigma2, n_pairs)
    return budget.model_copy(update={"inputs": inputs, "flags": flags})


# Осмысленность порога

def threshold_meaningful(
    n_pairs: int,
    sigma2: Optional[float] = None,
    sigma_tv: Optional[float] = None
) -> MeaningfulReport:
    """
    Порог бессмыслен, если его выполняет любая точка симплекса относительно
    равномерного распределения: max D2 = n, max TV = (n - 1) / n.
    """
    if n_pairs < 2:
        raise PlannerInputError(f"n_pairs must be at least 2, got {n_pairs}")
    if (sigma2 is None) == (sigma_tv is None):
        raise PlannerInputError("exactly one of sigma2 or sigma_tv must be given")

    n = n_pairs
    if sigma2 is not None:
        return MeaningfulReport(
            metric="renyi2",
            threshold=sigma2,
            n_pairs=n,
            meaningful=sigma2 < n,
            printed_limit=float(n),
            oracle_limit=float(n),
        )

    printed = math.sqrt((n - 1) / n)
    oracle = (n - 1) / n
    flags = []
    if oracle <= sigma_tv < printed:
        flags.append("printed_limit_disagrees")
    return MeaningfulReport(
        metric="tv",
        threshold=sigma_tv,
        n_pairs=n,
        meaningful=sigma_tv < oracle,
        printed_limit=printed,
        oracle_limit=oracle,
        flags=flags,
    )


def budget_table(
    gamma0: float,
    gamma: float,
    sigma_tv: float,
    sigma2: float,
    delta: float,
    s_count: int,
    a_count: int,
    k: int = 1
) -> List[SampleBudget]:
    """Все формулы на одном наборе входов (для подкоманды plan)"""
    n_pairs = s_count * a_count
    table = [
        weissman(n_pairs, delta, epsilon=2.0 * sigma_tv),
        chain_concentration_samples(gamma0, sigma_tv / 2.0, delta),
        tv_known_single(gamma0, sigma_tv, delta, n_pairs),
        tv_known_K(gamma0, sigma_tv, delta, k, n_pairs),
        tv_unknown(gamma, s_count, a_count, sigma_tv, delta, scope="per_pair"),
        tv_unknown(gamma, s_count, a_count, sigma_tv, delta, scope="total"),
    ]

    if n_pairs >= 3:
        known = renyi_known_bounds(gamma0, sigma2, n_pairs, k, delta)
        table.extend([known.lower, known.upper, known.rederived_lower, known.rederived_upper])
    if s_count >= 3:
        unknown = renyi_unknown_bounds(gamma, s_count, a_count, sigma2, delta)
        table.extend([unknown.lower, unknown.upper, unknown.rederived_lower, unknown.rederived_upper])

    logger.debug(f"Budget table with {len(table)} rows for {n_pairs} state-action pairs")
    return table


def budget_rows(table: List[SampleBudget]) -> List[Dict[str, object]]:
    """Плоские строки таблицы для CSV"""
    return [
        {
            "formula_id": budget.formula_id.value,
            "n_real": budget.n_real,
            "n_int": budget.n_int,
            "flags": ";".join(budget.flags),
            **{f"in_{name}": value for name, value in sorted(budget.inputs.items())},
        }
        for budget in table
    ]
