from typing import Any, Sequence

import numpy as np

from polcomp.common.errors import InvalidModelError, SupportViolationError
from polcomp.mdp_core import Cmp, as_pairs
from polcomp.mdp_core.returns import Samples
from .measures import as_vector, renyi2, _pair
from .models import WeightDiagnostics


def _weights(d_target: Any, d_behavior: Any) -> np.ndarray:
    target, behavior = _pair(d_target, d_behavior)
    offending = np.flatnonzero((target > 0) & (behavior <= 0))
    if offending.size:
        raise SupportViolationError(offending, "target mass outside behavior support")
    weights = np.zeros_like(target)
    np.divide(target, behavior, out=weights, where=behavior > 0)
    return weights


def is_variance_bound(r_max: float, gamma: float, renyi2_value: float, n: int) -> float:
    """(R_max / (1 - gamma))^2 D2 / N"""
    if n < 1:
        raise ValueError("n must be at least 1")
    return (r_max / (1.0 - gamma)) ** 2 * renyi2_value / n


def weight_diagnostics(
    d_target: Any,
    d_behavior: Any,
    n: int,
    r_max: float,
    gamma: float
) -> WeightDiagnostics:
    """Веса важности и тождество Var_d[w] = D2(d' || d) - 1"""
    weights = _weights(d_target, d_behavior)
    behavior = as_vector(d_behavior)

    mean = float(behavior @ weights)
    exact_variance = float(behavior @ weights ** 2) - mean ** 2
    divergence = renyi2(d_target, d_behavior)

    return WeightDiagnostics(
        weights=weights,
        exact_variance=exact_variance,
        renyi2=divergence,
        is_variance_bound=is_variance_bound(r_max, gamma, divergence, n),
    )


def is_estimate(samples: Samples, d_target: Any, d_behavior: Any, c: Cmp) -> float:
    """
    Оценка J(target) по выборке из d_behavior:
    (1 / ((1 - gamma) N)) sum w(s_n, a_n) R(s_n, a_n)
    """
    if c.reward is None:
        raise InvalidModelError(["reward table missing"])
    pairs = as_pairs(samples)
    flat = pairs[:, 0] * c.num_actions + pairs[:, 1]

    behavior = as_vector(d_behavior)
    hits = np.unique(flat[behavior[flat] <= 0])
    if hits.size:
        raise SupportViolationError(hits, "sample drawn where behavior occupancy is zero")

    weights = _weights(d_target, d_behavior)
    rewards = c.reward.ravel()[flat]
    return float(np.mean(weights[flat] * rewards)) / (1.0 - c.gamma)


def empirical_variance(estimates: Sequence[float]) -> float:
    """Несмещенная выборочная дисперсия оценок по репликациям"""
    return float(np.var(np.asarray(estimates, dtype=float), ddof=1))
