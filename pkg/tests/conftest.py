from pathlib import Path

import numpy as np
import pytest

from polcomp.common.models import Cmp, RngSeed, TabularPolicy
from polcomp.harness import generate_random_mdp

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def chain_cmp(s_to_s: np.ndarray, mu, gamma: float, reward=None) -> Cmp:
    """CMP с одним действием и заданной матрицей переходов"""
    s_to_s = np.asarray(s_to_s, dtype=float)
    return Cmp(
        num_states=s_to_s.shape[0],
        num_actions=1,
        P=s_to_s[:, None, :],
        mu=np.asarray(mu, dtype=float),
        gamma=gamma,
        reward=reward,
    )


def simplex_cmp(n: int, gamma: float = 0.9) -> Cmp:
    """Одно состояние и n действий: занятость совпадает со строкой политики"""
    return Cmp(num_states=1, num_actions=n, P=np.ones((1, n, 1)), mu=[1.0], gamma=gamma)


def simplex_policy(values) -> TabularPolicy:
    return TabularPolicy(pi=np.asarray(values, dtype=float).reshape(1, -1))


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def two_state_cmp() -> Cmp:
    """s1 -> s2 -> s2, mu = (1, 0), gamma = 0.5, R(s1) = 1, R(s2) = 0"""
    return chain_cmp([[0.0, 1.0], [0.0, 1.0]], [1.0, 0.0], 0.5, reward=[[1.0], [0.0]])


@pytest.fixture
def one_action_policy() -> TabularPolicy:
    return TabularPolicy(pi=[[1.0], [1.0]])


@pytest.fixture
def single_state_cmp() -> Cmp:
    return Cmp(
        num_states=1,
        num_actions=2,
        P=np.ones((1, 2, 1)),
        mu=[1.0],
        gamma=0.5,
        reward=[[1.0, 0.0]],
    )


@pytest.fixture
def reversible_cmp() -> Cmp:
    return generate_random_mdp(5, 3, 3, RngSeed(seed=20240601), reversible=True, gamma=0.9)


@pytest.fixture
def random_cmps():
    """Фабрика случайных Garnet MDP"""

    def build(count: int, seed: int = 0):
        rng = np.random.default_rng(seed)
        models = []
        for i in range(count):
            s = int(rng.integers(1, 7))
            a = int(rng.integers(1, 5))
            gamma = float(rng.choice([0.8, 0.9, 0.99]))
            branching = int(rng.integers(1, s + 1))
            models.append(generate_random_mdp(s, a, branching, RngSeed(seed=seed, stream=i), gamma=gamma))
        return models

    return build
