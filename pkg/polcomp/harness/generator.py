"""
Генераторы случайных MDP.

Garnet: каждая пара (s, a) переходит в branching различных состояний
с весами Dirichlet(1, ..., 1). Обратимый вариант: каждое P_a симметрично
и стохастично (общее кольцо плюс случайные ребра, симметричные возмущения
по действиям), поэтому цепь под не зависящей от состояния политикой
симметрична, а равномерное распределение стационарно.
"""

from typing import Union

import numpy as np
from loguru import logger

from polcomp.common.config import config
from polcomp.common.models import Cmp, RngSeed
from polcomp.mdp_core import ensure_valid

# Запас по строкам: диагональ P_a не меньше 1 - 1/1.25
ROW_SLACK = 1.25


def _garnet(rng: np.random.Generator, num_states: int, num_actions: int, branching: int) -> np.ndarray:
    transition = np.zeros((num_states, num_actions, num_states))
    for s in range(num_states):
        for a in range(num_actions):
            targets = rng.choice(num_states, size=branching, replace=False)
            transition[s, a, targets] = rng.dirichlet(np.ones(branching))
    return transition


def _symmetric_walk(rng: np.random.Generator, num_states: int, num_actions: int, branching: int) -> np.ndarray:
    if num_states == 1:
        return np.ones((1, num_actions, 1))

    half = np.zeros((num_states, num_states))
    ring = np.arange(num_states)
    half[ring, (ring + 1) % num_states] = 1.0

    # Дополнительные ребра с вероятностью (branching - 1) / (|S| - 1)
    extra = np.triu(rng.random((num_states, num_states)) < (branching - 1) / (num_states - 1), k=1)
    half += extra * rng.uniform(0.5, 1.5, size=(num_states, num_states))
    base = half + half.T
    edges = base > 0

    weights = []
    for _ in range(num_actions):
        noise = np.triu(rng.uniform(0.0, 0.5, size=(num_states, num_states)), k=1)
        weights.append(base + (noise + noise.T) * edges)
    weights = np.array(weights)

    scale = ROW_SLACK * weights.sum(axis=2).max()
    transition = np.empty((num_states, num_actions, num_states))
    for a in range(num_actions):
        walk = weights[a] / scale
        np.fill_diagonal(walk, 1.0 - walk.sum(axis=1))
        transition[:, a, :] = walk
    return transition


def generate_random_mdp(
    num_states: int,
    num_actions: int,
    branching: int,
    seed: Union[RngSeed, int],
    reversible: bool = False,
    gamma: float = config.harness_config["gamma"]
) -> Cmp:
    """Случайный MDP с равномерным mu и наградой U[0, 1)"""
    if num_states < 1 or num_actions < 1:
        raise ValueError(f"state and action counts must be positive, got {num_states}, {num_actions}")
    if not 1 <= branching <= num_states:
        raise ValueError(f"branching must lie in [1, {num_states}], got {branching}")
    if isinstance(seed, int):
        seed = RngSeed(seed=seed)
    rng = seed.generator()

    if reversible:
        transition = _symmetric_walk(rng, num_states, num_actions, branching)
    else:
        transition = _garnet(rng, num_states, num_actions, branching)

    c = Cmp(
        num_states=num_states,
        num_actions=num_actions,
        P=transition,
        mu=np.full(num_states, 1.0 / num_states),
        gamma=gamma,
        reward=rng.random((num_states, num_actions)),
        r_max=1.0,
    )
    ensure_valid(c)
    logger.debug(
        f"Generated {'reversible' if reversible else 'garnet'} MDP: "
        f"{num_states} states, {num_actions} actions, branching {branching}"
    )
    return c
