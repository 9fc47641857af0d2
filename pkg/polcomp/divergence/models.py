from typing import Any

import numpy as np
from pydantic import field_serializer, field_validator, model_validator

from polcomp.common.models import ArrayModel, frozen_array


class WeightDiagnostics(ArrayModel):
    """Веса важности w = d'/d, их дисперсия под d, D2 и оценка дисперсии IS"""
    weights: np.ndarray
    exact_variance: float
    renyi2: float
    is_variance_bound: float

    @field_validator("weights", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return frozen_array(value)

    @model_validator(mode="after")
    def _check_identity(self) -> "WeightDiagnostics":
        if self.renyi2 < 1.0 - 1e-12:
            raise ValueError(f"renyi2 below its floor: {self.renyi2}")
        if abs(self.exact_variance - (self.renyi2 - 1.0)) > 1e-12 * max(1.0, self.renyi2):
            raise ValueError("weight variance does not match renyi2 - 1")
        return self

    @field_serializer("weights")
    def _serialize_array(self, value: np.ndarray) -> list:
        return value.tolist()
