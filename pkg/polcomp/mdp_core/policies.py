from typing import Sequence

import numpy as np

from polcomp.common.models import RngSeed, frozen_array
from .models import Cmp, TabularPolicy


def uniform_policy(c: Cmp) -> TabularPolicy:
    return TabularPolicy(pi=np.full((c.num_states, c.num_actions), 1.0 / c.num_actions))


def deterministic_policy(c: Cmp, actions: Sequence[int]) -> TabularPolicy:
    """Детерминированная политика: в состоянии s выбирается actions[s]"""
    if len(actions) != c.num_states:
        raise ValueError(f"expected {c.num_states} actions, got {len(actions)}")
    pi = np.zeros((c.num_states, c.num_actions))
    pi[np.arange(c.num_states), np.asarray(actions, dtype=int)] = 1.0
    return TabularPolicy(pi=pi)


def random_policy(c: Cmp, seed: RngSeed, concentration: float = 1.0) -> TabularPolicy:
    """Строки политики из Dirichlet(concentration, ..., concentration)"""
    rng = seed.generator()
    pi = rng.dirichlet(np.full(c.num_actions, concentration), size=c.num_states)
    return TabularPolicy(pi=pi)


def with_initial_distribution(c: Cmp, mu: np.ndarray) -> Cmp:
    """Копия CMP с другим начальным распределением"""
    return Cmp.model_validate({**c.model_dump(by_alias=True), "mu": frozen_array(mu)})
