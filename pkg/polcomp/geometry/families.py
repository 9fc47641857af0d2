"""
Замкнутые конструкции на симплексе для порога Реньи.

Представитель uniform: семейство lemma4 на сфере D2(x || uniform) = sigma2.
Представитель vertex_rep = (1/sigma2, r, ..., r): семейства lemma5 и lemma6
на сфере D2(x || vertex_rep) = sigma2. Ветви, выходящие из симплекса,
отклоняются, а не обрезаются.
"""

import math
from typing import Dict, List, Literal, Optional

import numpy as np

from polcomp.common.errors import InfeasibleBranchError
from polcomp.common.models import RngSeed
from .models import SimplexPoint

Sign = Literal["+", "-"]

# Допуск на округление при построении ветви
ROUNDOFF = 1e-12


def _check_n(n: int, minimum: int = 2):
    if n < minimum:
        raise ValueError(f"n must be at least {minimum}, got {n}")


def _check_sigma2(sigma2: float):
    if not sigma2 > 1.0:
        raise InfeasibleBranchError(f"sigma2 must exceed 1, got {sigma2}")


def _check_sign(sign: str):
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")


def _family_point(values: np.ndarray, label: str) -> SimplexPoint:
    """Отклоняет отрицательные координаты, обнуляет шум округления"""
    negative = np.flatnonzero(values < -ROUNDOFF)
    if negative.size:
        i = int(negative[0])
        raise InfeasibleBranchError(
            f"{label} leaves the simplex: coordinate {i + 1} = {values[i]:.6g} < 0"
        )
    return SimplexPoint(values=np.maximum(values, 0.0), label=label)


def make_point(
    n: int,
    which: Literal["uniform", "vertex", "random"] = "uniform",
    index: int = 1,
    seed: Optional[RngSeed] = None
) -> SimplexPoint:
    """Равномерная точка, вершина (индексация с 1) или случайная точка Dirichlet(1)"""
    _check_n(n)
    if which == "uniform":
        return SimplexPoint(values=np.full(n, 1.0 / n), label="uniform")
    if which == "vertex":
        if not 1 <= index <= n:
            raise ValueError(f"vertex index {index} out of range 1..{n}")
        values = np.zeros(n)
        values[index - 1] = 1.0
        return SimplexPoint(values=values, label=f"vertex({index})")
    if which == "random":
        rng = (seed or RngSeed(seed=0)).generator()
        values = rng.dirichlet(np.ones(n))
        return SimplexPoint(values=values / values.sum(), label="free")
    raise ValueError(f"unknown point kind: {which}")


def lemma4_family(n: int, sigma2: float, sign: Sign = "+") -> SimplexPoint:
    """x1 = (1 +- sqrt((n - 1)(sigma2 - 1))) / n, остальные координаты равны"""
    _check_n(n)
    _check_sigma2(sigma2)
    _check_sign(sign)

    root = math.sqrt((n - 1) * (sigma2 - 1.0))
    first = (1.0 + root) / n if sign == "+" else (1.0 - root) / n
    values = np.empty(n)
    values[0] = first
    values[1:] = (1.0 - first) / (n - 1)
    return _family_point(values, f"lemma4({sign})")


def vertex_rep(n: int, sigma2: float) -> SimplexPoint:
    """(1/sigma2, r, ..., r), r = (sigma2 - 1) / (sigma2 (n - 1)); D2(vertex(1) || .) = sigma2"""
    _check_n(n)
    _check_sigma2(sigma2)
    values = np.empty(n)
    values[0] = 1.0 / sigma2
    values[1:] = (sigma2 - 1.0) / (sigma2 * (n - 1))
    return SimplexPoint(values=values, label="vertex_rep")


def lemma5_family(n: int, sigma2: float, branch: Literal["vertex", "interior"] = "vertex") -> SimplexPoint:
    """x1 = 1 (вершина) или x1 = (2 - sigma2) / sigma2 с равными остальными"""
    _check_n(n)
    _check_sigma2(sigma2)
    if branch == "vertex":
        values = np.zeros(n)
        values[0] = 1.0
    elif branch == "interior":
        values = np.empty(n)
        values[0] = (2.0 - sigma2) / sigma2
        values[1:] = 2.0 * (sigma2 - 1.0) / (sigma2 * (n - 1))
    else:
        raise ValueError(f"unknown branch: {branch}")
    return _family_point(values, f"lemma5({branch})")


def lemma6_family(n: int, sigma2: float, sign: Sign = "+") -> SimplexPoint:
    """
    x1 = 1/sigma2, x2 = r (1 +- sqrt(sigma2 (n - 2))),
    остальные r (1 -+ sqrt(sigma2 (n - 2)) / (n - 2)).
    """
    _check_n(n, minimum=3)
    _check_sigma2(sigma2)
    _check_sign(sign)

    r = (sigma2 - 1.0) / (sigma2 * (n - 1))
    q = math.sqrt(sigma2 * (n - 2))
    direction = 1.0 if sign == "+" else -1.0
    values = np.empty(n)
    values[0] = 1.0 / sigma2
    values[1] = r * (1.0 + direction * q)
    values[2:] = r * (1.0 - direction * q / (n - 2))
    return _family_point(values, f"lemma6({sign})")


def closed_form_tv(n: int, sigma2: float) -> Dict[str, float]:
    """
    max_tv = sqrt((n - 1)(sigma2 - 1)) / n,
    loosest_tv = (sigma2 - 1) / sigma2,
    min_tv = (sigma2 - 1) sqrt(n - 2) / (sqrt(sigma2) (n - 1)).
    """
    _check_n(n, minimum=3)
    _check_sigma2(sigma2)
    return {
        "max_tv": math.sqrt((n - 1) * (sigma2 - 1.0)) / n,
        "loosest_tv": (sigma2 - 1.0) / sigma2,
        "min_tv": (sigma2 - 1.0) * math.sqrt(n - 2) / (math.sqrt(sigma2) * (n - 1)),
    }


def polytope_faces(n: int) -> List[int]:
    """Число k-мерных граней симплекса над n парами, k = 0..n-1: C(n, k + 1)"""
    _check_n(n, minimum=1)
    return [math.comb(n, k + 1) for k in range(n)]
