"""
Дивергенции между распределениями на парах (s, a).

D2 везде экспоненцированная форма Реньи порядка 2: sum p^2 / q, минимум 1.
"""

import math
from typing import Any, Sequence

import numpy as np

from polcomp.common.errors import DimensionMismatchError


class TaggedInfinity(float):
    """+inf с индексами, где p > 0 при q = 0"""

    offending_indices: tuple

    def __new__(cls, offending_indices: Sequence[int]):
        value = super().__new__(cls, math.inf)
        value.offending_indices = tuple(int(i) for i in offending_indices)
        return value

    def __repr__(self) -> str:
        return f"TaggedInfinity(offending_indices={list(self.offending_indices)})"


def as_vector(x: Any) -> np.ndarray:
    """Вектор значений из OccupancyMeasure, SimplexPoint или массива"""
    values = getattr(x, "values", x)
    return np.asarray(values, dtype=float).ravel()


def _pair(p: Any, q: Any):
    p, q = as_vector(p), as_vector(q)
    if p.shape != q.shape:
        raise DimensionMismatchError(f"length mismatch: {p.size} vs {q.size}")
    return p, q


def total_variation(p: Any, q: Any) -> float:
    """D_TV = 1/2 sum |p - q|"""
    p, q = _pair(p, q)
    return 0.5 * float(np.sum(np.abs(p - q)))


def l1_distance(p: Any, q: Any) -> float:
    p, q = _pair(p, q)
    return float(np.sum(np.abs(p - q)))


def euclidean_distance(p: Any, q: Any) -> float:
    p, q = _pair(p, q)
    return float(np.linalg.norm(p - q))


def renyi2(p: Any, q: Any) -> float:
    """
    D2(p || q) = sum p^2 / q по носителю p.
    Если p > 0 там, где q = 0, возвращается TaggedInfinity.
    """
    p, q = _pair(p, q)
    support = p > 0
    offending = np.flatnonzero(support & (q <= 0))
    if offending.size:
        return TaggedInfinity(offending)
    return float(np.sum(p[support] ** 2 / q[support]))
