from typing import Sequence, Union

import numpy as np

from polcomp.common.errors import InvalidModelError
from .models import Cmp, TabularPolicy
from .occupancy import occupancy

Samples = Union[np.ndarray, Sequence[Sequence[int]]]


def _require_reward(c: Cmp) -> np.ndarray:
    if c.reward is None:
        raise InvalidModelError(["reward table missing"])
    return c.reward


def as_pairs(samples: Samples) -> np.ndarray:
    """Пары (s, a) как целочисленный массив формы (N, 2)"""
    pairs = np.asarray(samples, dtype=np.int64).reshape(-1, 2)
    if pairs.shape[0] == 0:
        raise ValueError("empty sample batch")
    return pairs


def exact_return(c: Cmp, p: TabularPolicy) -> float:
    """J = (1 / (1 - gamma)) sum_{s,a} d(s, a) R(s, a)"""
    reward = _require_reward(c)
    d = occupancy(c, p).values
    return float(d @ reward.ravel()) / (1.0 - c.gamma)


def mc_return(samples: Samples, c: Cmp) -> float:
    """Оценка Монте-Карло по выборке из занятости: mean R(s_n, a_n) / (1 - gamma)"""
    reward = _require_reward(c)
    pairs = as_pairs(samples)
    return float(np.mean(reward[pairs[:, 0], pairs[:, 1]])) / (1.0 - c.gamma)
