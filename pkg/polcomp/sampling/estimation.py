"""
Генеративная модель: n_per_pair обращений к P(.|s,a) для каждой пары,
оценка P_hat и граница леммы о симуляции.
"""

import numpy as np
from loguru import logger

from polcomp.common.models import RngSeed
from polcomp.mdp_core import Cmp, TabularPolicy, OccupancyMeasure, ensure_valid, occupancy
from .models import EstimatedModel


def estimate_transition_model(c: Cmp, n_per_pair: int, seed: RngSeed) -> EstimatedModel:
    """P_hat[s][a] - эмпирическое распределение n_per_pair переходов из P(.|s,a)"""
    if n_per_pair < 1:
        raise ValueError("n_per_pair must be at least 1")
    ensure_valid(c)
    rng = seed.generator()

    # Мультиномиальные счетчики эквивалентны n_per_pair независимым переходам
    counts = rng.multinomial(n_per_pair, c.transition)
    logger.debug(f"Generative model queried {n_per_pair * c.num_pairs} times (stream {seed.stream})")
    return EstimatedModel(p_hat=counts / n_per_pair, counts_per_pair=n_per_pair, source=c)


def occupancy_on_estimate(e: EstimatedModel, p: TabularPolicy) -> OccupancyMeasure:
    """Занятость политики на оцененном MDP (S, A, P_hat, mu, gamma)"""
    return occupancy(e.as_cmp(), p)


def l1_transition_errors(c: Cmp, e: EstimatedModel) -> np.ndarray:
    """Таблица ||P_hat(.|s,a) - P(.|s,a)||_1 формы (S, A)"""
    return np.abs(e.p_hat - c.transition).sum(axis=2)


def simulation_gap_bound(c: Cmp, e: EstimatedModel, p: TabularPolicy) -> float:
    """(gamma / (1 - gamma)) E_{(s,a)~d}[||P_hat(.|s,a) - P(.|s,a)||_1], d - занятость на истинном c"""
    d = occupancy(c, p).values
    expected_error = float(d @ l1_transition_errors(c, e).ravel())
    return c.gamma / (1.0 - c.gamma) * expected_error
