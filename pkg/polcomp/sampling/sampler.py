"""
Сэмплирование пар (s, a) из занятости.

geometric: траектория из mu, на каждом шаге с вероятностью 1 - gamma
остановка и выдача текущей пары; выдача распределена точно как d(s, a).
stationary: прогон индуцированной цепи после burn-in = 10 / gamma0 шагов,
каждая посещенная пара выдается; выборки зависимы.
"""

import math
from typing import List, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from polcomp.common.config import config
from polcomp.common.errors import NonErgodicChainError
from polcomp.common.models import RngSeed
from polcomp.mdp_core import Cmp, TabularPolicy, OccupancyMeasure, ensure_valid, induced_chain, spectral_gap
from .models import SampleBatch, SamplingMode


def categorical(rng: np.random.Generator, cdf_rows: np.ndarray) -> np.ndarray:
    """Индексы по строкам кумулятивных распределений (по одному равномерному числу на строку)"""
    cdf_rows = np.atleast_2d(cdf_rows)
    draws = rng.random(cdf_rows.shape[0])
    index = np.sum(cdf_rows <= draws[:, None], axis=1)
    return np.minimum(index, cdf_rows.shape[1] - 1)


def empirical_occupancy(pairs: np.ndarray, num_states: int, num_actions: int) -> OccupancyMeasure:
    """Частоты пар: counts / N"""
    flat = pairs[:, 0] * num_actions + pairs[:, 1]
    counts = np.bincount(flat, minlength=num_states * num_actions)
    return OccupancyMeasure(
        values=counts / pairs.shape[0],
        kind="empirical",
        sample_count=int(pairs.shape[0]),
        num_actions=num_actions,
    )


def _sample_geometric(c: Cmp, p: TabularPolicy, n: int, rng: np.random.Generator) -> Tuple[np.ndarray, int]:
    pi_cdf = np.cumsum(p.pi, axis=1)
    transition_cdf = np.cumsum(c.transition, axis=2)

    states = categorical(rng, np.tile(np.cumsum(c.mu), (n, 1)))
    out = np.empty((n, 2), dtype=np.int64)
    active = np.arange(n)
    env_steps = 0

    while active.size:
        s = states[active]
        a = categorical(rng, pi_cdf[s])
        env_steps += int(active.size)

        stop = rng.random(active.size) < 1.0 - c.gamma
        done = active[stop]
        out[done, 0] = s[stop]
        out[done, 1] = a[stop]

        go = ~stop
        if np.any(go):
            states[active[go]] = categorical(rng, transition_cdf[s[go], a[go]])
        active = active[go]

    return out, env_steps


def _sample_stationary(c: Cmp, p: TabularPolicy, n: int, rng: np.random.Generator) -> Tuple[np.ndarray, int, int]:
    chain = induced_chain(c, p)
    info = spectral_gap(chain)
    if info.gamma0 <= 0.0:
        raise NonErgodicChainError("stationary sampling needs a positive spectral gap (gamma0 = 0)")

    burn_in = math.ceil(config.sampling_config["burn_in_factor"] / info.gamma0)
    chain_cdf = np.cumsum(chain.matrix, axis=1)
    last = chain_cdf.shape[1] - 1

    state = int(categorical(rng, np.cumsum(c.mu))[0])
    draws = rng.random(burn_in + n)
    visited = np.empty(n, dtype=np.int64)
    for step in range(burn_in + n):
        if step >= burn_in:
            visited[step - burn_in] = state
        state = min(int(np.searchsorted(chain_cdf[state], draws[step], side="right")), last)

    actions = categorical(rng, np.cumsum(p.pi, axis=1)[visited])
    return np.column_stack((visited, actions)), burn_in + n, burn_in


def sample_occupancy(
    c: Cmp,
    p: TabularPolicy,
    n: int,
    seed: RngSeed,
    mode: SamplingMode = "geometric"
) -> SampleBatch:
    """Выборка из n пар и эмпирическая занятость counts / n"""
    if n < 1:
        raise ValueError("n must be at least 1")
    ensure_valid(c, p)
    rng = seed.generator()

    if mode == "geometric":
        pairs, env_steps = _sample_geometric(c, p, n, rng)
        burn_in = 0
    elif mode == "stationary":
        pairs, env_steps, burn_in = _sample_stationary(c, p, n, rng)
    else:
        raise ValueError(f"unknown sampling mode: {mode}")

    logger.debug(f"Sampled {n} pairs in {mode} mode with {env_steps} env steps (stream {seed.stream})")
    return SampleBatch(
        pairs=pairs,
        occupancy=empirical_occupancy(pairs, c.num_states, c.num_actions),
        mode=mode,
        env_steps=env_steps,
        burn_in=burn_in,
        seed=seed,
    )


def samples_frame(batches: List[Tuple[int, SampleBatch]]) -> pd.DataFrame:
    """Таблица выборок для CSV: replicate, step, s, a"""
    frames = [
        pd.DataFrame({
            "replicate": replicate,
            "step": np.arange(batch.size),
            "s": batch.pairs[:, 0],
            "a": batch.pairs[:, 1],
        })
        for replicate, batch in batches
    ]
    if not frames:
        return pd.DataFrame(columns=["replicate", "step", "s", "a"])
    return pd.concat(frames, ignore_index=True)
