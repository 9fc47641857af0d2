"""
Дисконтированная мера занятости d(s, a) = pi(a|s) d(s).

d(s) - неподвижная точка d = (1 - gamma) mu + gamma M^T d, где M - цепь,
индуцированная политикой. Пары (s, a) развернуты как s * |A| + a.
"""

import math
import warnings

import numpy as np
import scipy.linalg
from loguru import logger

from polcomp.common.config import config
from polcomp.common.errors import SingularSystemError
from .chain import induced_chain
from .models import Cmp, TabularPolicy, OccupancyMeasure
from .validation import ensure_valid


def occupancy(c: Cmp, p: TabularPolicy) -> OccupancyMeasure:
    """Точная занятость через LU-разложение с частичным выбором ведущего элемента"""
    ensure_valid(c, p)
    chain = induced_chain(c, p).matrix
    system = np.eye(c.num_states) - c.gamma * chain.T
    rhs = (1.0 - c.gamma) * c.mu

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, pivots = scipy.linalg.lu_factor(system)

    smallest_pivot = float(np.min(np.abs(np.diag(lu))))
    if smallest_pivot < config.occupancy_config["pivot_floor"]:
        raise SingularSystemError(f"pivot {smallest_pivot:.3e} below floor for gamma={c.gamma}")

    state_dist = np.maximum(scipy.linalg.lu_solve((lu, pivots), rhs), 0.0)
    values = p.pi * state_dist[:, None]
    logger.debug(f"Occupancy solved for {c.num_states} states, smallest pivot {smallest_pivot:.3e}")

    return OccupancyMeasure(values=values.ravel(), kind="exact", sample_count=0, num_actions=c.num_actions)


def series_horizon(gamma: float, tol: float) -> int:
    """Наименьшее T с gamma^(T+1) / (1 - gamma) < tol"""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma out of range: {gamma}")

    horizon = max(0, math.ceil(math.log(tol * (1.0 - gamma)) / math.log(gamma)) - 1)
    while gamma ** (horizon + 1) / (1.0 - gamma) >= tol:
        horizon += 1
    while horizon > 0 and gamma ** horizon / (1.0 - gamma) < tol:
        horizon -= 1
    return horizon


def occupancy_oracle(c: Cmp, p: TabularPolicy, tol: float) -> OccupancyMeasure:
    """
    Независимый оракул: усеченный ряд (1 - gamma) sum_{t<=T} gamma^t mu^T M^t.
    Хвост ряда не перенормируется, ошибка в L1 меньше tol.
    """
    ensure_valid(c, p)
    horizon = series_horizon(c.gamma, tol)
    chain = induced_chain(c, p).matrix

    dist = c.mu.copy()
    total = np.zeros(c.num_states)
    weight = 1.0 - c.gamma
    for _ in range(horizon + 1):
        total += weight * dist
        dist = dist @ chain
        weight *= c.gamma

    logger.debug(f"Occupancy oracle used {horizon + 1} series terms")
    values = p.pi * total[:, None]
    return OccupancyMeasure(values=values.ravel(), kind="exact", sample_count=0, num_actions=c.num_actions)
