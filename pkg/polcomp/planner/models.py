import math
from enum import Enum
from typing import Dict, List, Optional, Literal

from pydantic import BaseModel, Field, model_validator


class FormulaId(str, Enum):
    """Идентификаторы формул объема выборки"""
    WEISSMAN = "weissman"
    CHAIN_CONCENTRATION = "chain_concentration"
    TV_KNOWN_SINGLE = "tv_known_single"
    TV_KNOWN_K = "tv_known_K"
    TV_UNKNOWN_PER_PAIR = "tv_unknown_per_pair"
    TV_UNKNOWN_TOTAL = "tv_unknown_total"
    RENYI_KNOWN_LOWER = "renyi_known_lower"
    RENYI_KNOWN_UPPER = "renyi_known_upper"
    RENYI_UNKNOWN_LOWER = "renyi_unknown_lower"
    RENYI_UNKNOWN_UPPER = "renyi_unknown_upper"


class SampleBudget(BaseModel):
    """Результат формулы: вещественное N и его округление вверх"""
    formula_id: FormulaId
    inputs: Dict[str, float]
    n_real: float = Field(gt=0)
    n_int: int
    flags: List[str] = []

    @model_validator(mode="before")
    @classmethod
    def _ceiling(cls, data):
        if isinstance(data, dict) and data.get("n_int") is None and data.get("n_real") is not None:
            data = {**data, "n_int": math.ceil(data["n_real"])}
        return data

    @model_validator(mode="after")
    def _check_ceiling(self) -> "SampleBudget":
        if self.n_int != math.ceil(self.n_real):
            raise ValueError(f"n_int {self.n_int} is not the ceiling of {self.n_real}")
        return self


class TailBound(BaseModel):
    """Вероятностная оценка; raw может превышать 1, bound обрезан до 1"""
    raw: float
    bound: float
    vacuous: bool


class RenyiBudgets(BaseModel):
    """Нижняя и верхняя оценки N для порога Реньи, плюс переполученные через TV"""
    lower: SampleBudget
    upper: SampleBudget
    rederived_lower: Optional[SampleBudget] = None
    rederived_upper: Optional[SampleBudget] = None
    flags: List[str] = []


class MeaningfulReport(BaseModel):
    """Осмысленность порога: напечатанный предел и истинный (переборный)"""
    metric: Literal["tv", "renyi2"]
    threshold: float
    n_pairs: int
    meaningful: bool
    printed_limit: float
    oracle_limit: float
    flags: List[str] = []
