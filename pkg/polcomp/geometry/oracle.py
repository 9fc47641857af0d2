"""
Независимый переборный оракул экстремумов TV на сфере D2(x || rep) = sigma2.

Точка-кандидат y на симплексе задает направление y - rep; радиальное
масштабирование x = rep + s (y - rep) попадает на сферу точно, так как
sum(y - rep) = 0 дает D2(x || rep) = 1 + s^2 sum((y - rep)^2 / rep).
Кандидат допустим, если x остается на симплексе.
"""

import math
from typing import List, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed
from loguru import logger

from polcomp.common.config import config
from polcomp.common.errors import InfeasibleBranchError, OracleError, SupportViolationError
from polcomp.common.models import RngSeed
from polcomp.divergence import as_vector
from .models import OracleBudget, OracleResult

ROUNDOFF = 1e-12
PROPOSALS = 8
STARTS = 32


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Евклидова проекция на симплекс (по строкам для матрицы), алгоритм с сортировкой"""
    v = np.asarray(v, dtype=float)
    if v.ndim == 1:
        return project_to_simplex(v.reshape(1, -1)).ravel()

    n = v.shape[1]
    u = np.sort(v, axis=1)[:, ::-1]
    cssv = np.cumsum(u, axis=1) - 1.0
    ind = np.arange(n) + 1
    rho = np.count_nonzero(u - cssv / ind > 0, axis=1)
    theta = cssv[np.arange(v.shape[0]), rho - 1] / rho
    return np.maximum(v - theta[:, None], 0.0)


def default_budget() -> OracleBudget:
    return OracleBudget(**{name: config.oracle_config[name] for name in OracleBudget.model_fields})


def _on_sphere(rep: np.ndarray, points: np.ndarray, sigma2: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Радиальная проекция на сферу; возвращает точки, маску допустимости и TV"""
    delta = points - rep
    spread = np.sum(delta ** 2 / rep, axis=1)
    valid = spread > 0
    scale = np.zeros(points.shape[0])
    scale[valid] = np.sqrt((sigma2 - 1.0) / spread[valid])

    x = rep + scale[:, None] * delta
    feasible = valid & (x.min(axis=1) >= -ROUNDOFF)
    x = np.maximum(x, 0.0)
    x /= x.sum(axis=1, keepdims=True)

    residual = np.abs(np.sum(x ** 2 / rep, axis=1) - sigma2)
    feasible &= residual <= config.oracle_config["constraint_tolerance"]
    tv = 0.5 * np.sum(np.abs(x - rep), axis=1)
    return x, feasible, tv


class _Extrema:
    """Накопитель лучших найденных точек"""

    def __init__(self):
        self.tv_max, self.argmax = -math.inf, None
        self.tv_min, self.argmin = math.inf, None
        self.evaluated = 0

    def update(self, x: np.ndarray, feasible: np.ndarray, tv: np.ndarray):
        self.evaluated += int(x.shape[0])
        if not np.any(feasible):
            return
        hi = int(np.argmax(np.where(feasible, tv, -math.inf)))
        lo = int(np.argmin(np.where(feasible, tv, math.inf)))
        if tv[hi] > self.tv_max:
            self.tv_max, self.argmax = float(tv[hi]), x[hi].copy()
        if tv[lo] < self.tv_min:
            self.tv_min, self.argmin = float(tv[lo]), x[lo].copy()

    def merge(self, other: "_Extrema"):
        self.evaluated += other.evaluated
        if other.argmax is not None and other.tv_max > self.tv_max:
            self.tv_max, self.argmax = other.tv_max, other.argmax
        if other.argmin is not None and other.tv_min < self.tv_min:
            self.tv_min, self.argmin = other.tv_min, other.argmin


def _compositions(total: int, parts: int) -> np.ndarray:
    if parts == 1:
        return np.array([[total]])
    if parts == 2:
        first = np.arange(total + 1)
        return np.column_stack((first, total - first))
    blocks = []
    for k in range(total + 1):
        rest = _compositions(total - k, parts - 1)
        blocks.append(np.column_stack((np.full(rest.shape[0], k), rest)))
    return np.vstack(blocks)


def _grid_scan(rep: np.ndarray, sigma2: float, resolution: int) -> _Extrema:
    """Полный перебор сетки с шагом 1/resolution, блоками по первой координате"""
    found = _Extrema()
    n = rep.size
    for first in range(resolution + 1):
        rest = _compositions(resolution - first, n - 1)
        points = np.column_stack((np.full(rest.shape[0], first), rest)) / resolution
        found.update(*_on_sphere(rep, points, sigma2))
    return found


def _anchors(n: int) -> np.ndarray:
    """Вершины и середины ребер симплекса"""
    points: List[np.ndarray] = list(np.eye(n))
    for i in range(n):
        for j in range(i + 1, n):
            midpoint = np.zeros(n)
            midpoint[[i, j]] = 0.5
            points.append(midpoint)
    return np.array(points)


def _local_search(rep: np.ndarray, sigma2: float, iterations: int, rng: np.random.Generator, maximize: bool) -> _Extrema:
    found = _Extrema()
    n = rep.size
    sign = 1.0 if maximize else -1.0

    x, feasible, tv = _on_sphere(rep, rng.dirichlet(np.ones(n), size=STARTS), sigma2)
    found.update(x, feasible, tv)
    if not np.any(feasible):
        return found

    best = int(np.argmax(np.where(feasible, sign * tv, -math.inf)))
    current, current_value = x[best], sign * tv[best]
    step = 0.5

    for _ in range(iterations):
        proposals = project_to_simplex(current + step * rng.standard_normal((PROPOSALS, n)))
        x, feasible, tv = _on_sphere(rep, proposals, sigma2)
        found.update(x, feasible, tv)

        scored = np.where(feasible, sign * tv, -math.inf)
        i = int(np.argmax(scored))
        if scored[i] > current_value:
            current, current_value = x[i], scored[i]
        else:
            step = max(step * 0.7, 1e-6)

    return found


def _restart(rep: np.ndarray, sigma2: float, iterations: int, seed: RngSeed, index: int) -> _Extrema:
    rng = seed.child_generator(index)
    found = _local_search(rep, sigma2, iterations, rng, maximize=True)
    found.merge(_local_search(rep, sigma2, iterations, rng, maximize=False))
    return found


def tv_extrema_oracle(
    rep,
    sigma2: float,
    budget: Optional[OracleBudget] = None,
    seed: Optional[RngSeed] = None,
    jobs: int = 1
) -> OracleResult:
    """
    Минимум и максимум TV(x, rep) при D2(x || rep) = sigma2 на симплексе:
    вершины и середины ребер, случайные рестарты локального поиска
    и полный перебор сетки для малых n.
    """
    rep = as_vector(rep)
    if np.any(rep <= 0):
        raise SupportViolationError(np.flatnonzero(rep <= 0), "representative must be strictly positive")
    if not sigma2 > 1.0:
        raise InfeasibleBranchError(f"sigma2 must exceed 1, got {sigma2}")

    budget = budget or default_budget()
    seed = seed or RngSeed(seed=config.default_seed)
    n = rep.size

    found = _Extrema()
    found.update(*_on_sphere(rep, _anchors(n), sigma2))

    grid_used = n <= budget.grid_max_n
    if grid_used:
        found.merge(_grid_scan(rep, sigma2, budget.grid_resolution))

    restarts = Parallel(n_jobs=jobs)(
        delayed(_restart)(rep, sigma2, budget.iterations, seed, index)
        for index in range(budget.restarts)
    )
    for result in restarts:
        found.merge(result)

    if found.argmax is None or found.argmin is None:
        raise OracleError(
            f"no feasible point with D2 = {sigma2} found after {found.evaluated} evaluations (n={n})"
        )

    logger.debug(
        f"Oracle n={n} sigma2={sigma2}: tv in [{found.tv_min:.6f}, {found.tv_max:.6f}], "
        f"{found.evaluated} evaluations"
    )
    return OracleResult(
        tv_min=found.tv_min,
        tv_max=found.tv_max,
        argmin=found.argmin.tolist(),
        argmax=found.argmax.tolist(),
        evaluated=found.evaluated,
        grid_used=grid_used,
    )
