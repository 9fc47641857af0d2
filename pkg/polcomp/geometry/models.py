from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, field_serializer, field_validator, model_validator

from polcomp.common.models import ArrayModel, frozen_array

SIMPLEX_TOLERANCE = 1e-12


class SimplexPoint(ArrayModel):
    """
    Точка симплекса над n парами (s, a).

    label: uniform, vertex(i), lemma4(+|-), vertex_rep, lemma5(vertex|interior),
    lemma6(+|-) или free.
    """
    values: np.ndarray
    label: str = "free"

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return frozen_array(np.asarray(value, dtype=float).ravel())

    @model_validator(mode="after")
    def _check_simplex(self) -> "SimplexPoint":
        if self.values.size < 1:
            raise ValueError("empty simplex point")
        if np.any(self.values < 0):
            raise ValueError(f"negative coordinate in {self.label} point")
        total = float(self.values.sum())
        if abs(total - 1.0) > SIMPLEX_TOLERANCE:
            raise ValueError(f"{self.label} point sums to {total!r}")
        return self

    @property
    def n(self) -> int:
        return int(self.values.size)

    @field_serializer("values")
    def _serialize_array(self, value: np.ndarray) -> list:
        return value.tolist()


class OracleBudget(BaseModel):
    restarts: int = 16
    iterations: int = 300
    grid_resolution: int = 200
    grid_max_n: int = 4


class OracleResult(BaseModel):
    """Найденные оракулом экстремумы TV на сфере D2(x || rep) = sigma2"""
    tv_min: float
    tv_max: float
    argmin: List[float]
    argmax: List[float]
    evaluated: int
    grid_used: bool


class FamilyCheck(BaseModel):
    """Проверка точки семейства: невязка D2 и совпадение TV с замкнутой формой"""
    label: str
    representative: str
    feasible: bool
    renyi2_residual: Optional[float] = None
    tv: Optional[float] = None
    closed_form: Optional[str] = None
    tv_residual: Optional[float] = None
    euclidean: Optional[float] = None
    reason: Optional[str] = None


class GeometryCertificate(BaseModel):
    n: int
    sigma2: float
    closed_form: Dict[str, float]
    family_checks: List[FamilyCheck]
    oracle: Dict[str, OracleResult]
    comparisons: Dict[str, bool]
    passed: bool
    flags: List[str] = []

    def row(self) -> Dict[str, Any]:
        """Строка для CSV аудита геометрии"""
        return {
            "n": self.n,
            "sigma2": self.sigma2,
            "max_tv": self.closed_form["max_tv"],
            "loosest_tv": self.closed_form["loosest_tv"],
            "min_tv": self.closed_form["min_tv"],
            "oracle_max": self.oracle["uniform"].tv_max,
            "oracle_min": self.oracle["vertex_rep"].tv_min,
            "oracle_exceeds_max_tv": self.comparisons["oracle_exceeds_max_tv"],
            "failed": not self.passed,
        }
