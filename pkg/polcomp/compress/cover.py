"""
Покрытие множества кандидатов K представителями:
max_i min_k D(d_i || d_k) <= sigma.

Первый представитель - 1-центр argmin_j max_i D(d_i || d_j), далее
добавляется самый далекий от текущих представителей кандидат.
При равенстве выигрывает меньший индекс.
"""

from typing import Optional

import numpy as np
from joblib import Parallel, delayed
from loguru import logger

from polcomp.common.config import config
from polcomp.common.errors import CoverError
from polcomp.divergence import renyi2, total_variation
from .models import CandidateSet, CompressionResult, CoverCheck, Metric

FLOORS = {"tv": 0.0, "renyi2": 1.0}


def _divergence(metric: Metric):
    if metric == "tv":
        return total_variation
    if metric == "renyi2":
        return renyi2
    raise ValueError(f"unknown metric: {metric}")


def _row(cs: CandidateSet, i: int, metric: Metric) -> np.ndarray:
    measure = _divergence(metric)
    return np.array([measure(cs.occupancies[i], q) for q in cs.occupancies], dtype=float)


def divergence_matrix(cs: CandidateSet, metric: Metric, jobs: int = 1) -> np.ndarray:
    """D[i][j] = D(d_i || d_j); нарушение носителя для renyi2 дает +inf"""
    _divergence(metric)
    rows = Parallel(n_jobs=jobs)(delayed(_row)(cs, i, metric) for i in range(len(cs)))
    matrix = np.vstack(rows)
    if metric == "renyi2" and np.isinf(matrix).any():
        logger.debug(f"Divergence matrix has {int(np.isinf(matrix).sum())} support violations")
    return matrix


def _covered(value: float, sigma: float) -> bool:
    return value <= sigma + config.compress_config["cover_tolerance"] * max(1.0, abs(sigma))


def greedy_cover(
    cs: CandidateSet,
    sigma: float,
    metric: Metric,
    max_representatives: Optional[int] = None,
    matrix: Optional[np.ndarray] = None,
    jobs: int = 1
) -> CompressionResult:
    """Жадное покрытие до радиуса sigma"""
    if sigma < FLOORS[metric]:
        raise ValueError(f"sigma {sigma} is below the {metric} floor {FLOORS[metric]}")
    if matrix is None:
        matrix = divergence_matrix(cs, metric, jobs)
    limit = max_representatives or len(cs)

    # 1-центр: наименьший худший радиус по столбцу
    first = int(np.argmin(matrix.max(axis=0)))
    representatives = [first]
    radius = matrix[:, first].copy()
    trace = [float(radius.max())]

    while not _covered(float(radius.max()), sigma):
        worst = int(np.argmax(radius))
        if len(representatives) >= limit:
            logger.error(f"Cover with {limit} representatives leaves candidate {worst} at {radius[worst]}")
            raise CoverError(worst, float(radius[worst]))
        representatives.append(worst)
        radius = np.minimum(radius, matrix[:, worst])
        trace.append(float(radius.max()))

    assignment = [representatives[int(k)] for k in np.argmin(matrix[:, representatives], axis=1)]
    logger.debug(f"Greedy cover: K={len(representatives)} for sigma={sigma} ({metric}), radius {trace[-1]:.6g}")
    return CompressionResult(
        representative_indices=representatives,
        achieved_radius=trace[-1],
        metric=metric,
        sigma=sigma,
        assignment=assignment,
        radius_trace=trace,
    )


def verify_cover(cs: CandidateSet, result: CompressionResult) -> CoverCheck:
    """Пересчет max-min с нуля только по столбцам представителей"""
    measure = _divergence(result.metric)
    for index in result.representative_indices:
        if not 0 <= index < len(cs):
            raise ValueError(f"representative index {index} out of range 0..{len(cs) - 1}")

    worst_candidate, worst_value, worst_representative = 0, -np.inf, None
    for i, d in enumerate(cs.occupancies):
        values = [float(measure(d, cs.occupancies[k])) for k in result.representative_indices]
        best = int(np.argmin(values))
        if values[best] > worst_value:
            worst_candidate, worst_value = i, values[best]
            worst_representative = result.representative_indices[best]

    return CoverCheck(
        ok=_covered(worst_value, result.sigma),
        worst_candidate=worst_candidate,
        worst_value=worst_value,
        worst_representative=worst_representative,
    )
