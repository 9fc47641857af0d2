from typing import List, Optional

import numpy as np

from polcomp.common.config import config
from polcomp.common.errors import InvalidModelError, DimensionMismatchError
from .models import Cmp, TabularPolicy


def validate_cmp(c: Cmp) -> List[str]:
    """
    Проверка инвариантов CMP. Возвращает список нарушений (пустой - модель корректна).
    Ничего не выбрасывает.
    """
    tol = config.occupancy_config["stochastic_tolerance"]
    violations: List[str] = []

    for s in range(c.num_states):
        for a in range(c.num_actions):
            row = c.transition[s, a]
            if np.any(row < 0):
                violations.append(f"negative transition probability at (s={s}, a={a})")
            total = float(row.sum())
            if abs(total - 1.0) > tol:
                violations.append(f"transition row (s={s}, a={a}) sums to {total:.12g}")

    if np.any(c.mu < 0):
        violations.append("mu has negative entries")
    if abs(float(c.mu.sum()) - 1.0) > tol:
        violations.append(f"mu sums to {float(c.mu.sum()):.12g}")

    if not 0.0 < c.gamma < 1.0:
        violations.append(f"gamma out of range: {c.gamma}")

    if c.reward is not None:
        if np.any(c.reward < 0) or np.any(c.reward > c.r_max):
            violations.append(f"reward outside [0, {c.r_max}]")

    return violations


def validate_policy(p: TabularPolicy, c: Optional[Cmp] = None) -> List[str]:
    """Проверка строк политики и размерностей относительно CMP"""
    tol = config.occupancy_config["stochastic_tolerance"]
    violations: List[str] = []

    if c is not None and p.pi.shape != (c.num_states, c.num_actions):
        violations.append(f"policy shape {p.pi.shape} does not match ({c.num_states}, {c.num_actions})")
    if np.any(p.pi < 0):
        violations.append("policy has negative entries")
    for s, total in enumerate(p.pi.sum(axis=1)):
        if abs(float(total) - 1.0) > tol:
            violations.append(f"policy row s={s} sums to {float(total):.12g}")

    return violations


def ensure_valid(c: Cmp, p: Optional[TabularPolicy] = None):
    """Выбрасывает исключение, если CMP или политика некорректны"""
    if p is not None and p.pi.shape != (c.num_states, c.num_actions):
        raise DimensionMismatchError(
            f"policy shape {p.pi.shape} does not match ({c.num_states}, {c.num_actions})"
        )
    violations = validate_cmp(c)
    if p is not None:
        violations += validate_policy(p)
    if violations:
        raise InvalidModelError(violations)
