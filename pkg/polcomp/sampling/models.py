from typing import Any, Literal

import numpy as np
from pydantic import Field, field_serializer, field_validator, model_validator

from polcomp.common.config import config
from polcomp.common.models import ArrayModel, Cmp, OccupancyMeasure, RngSeed, frozen_array

SamplingMode = Literal["geometric", "stationary"]


class EstimatedModel(ArrayModel):
    """Оценка P(.|s,a) по n_per_pair обращениям к генеративной модели"""
    p_hat: np.ndarray
    counts_per_pair: int = Field(ge=1)
    source: Cmp

    @field_validator("p_hat", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return frozen_array(value)

    @model_validator(mode="after")
    def _check_rows(self) -> "EstimatedModel":
        if self.p_hat.shape != self.source.transition.shape:
            raise ValueError(f"p_hat shape {self.p_hat.shape} does not match {self.source.transition.shape}")
        tol = config.occupancy_config["stochastic_tolerance"]
        if not np.allclose(self.p_hat.sum(axis=2), 1.0, atol=tol, rtol=0.0):
            raise ValueError("p_hat rows must sum to 1")
        return self

    def as_cmp(self) -> Cmp:
        """Оцененный CMP (S, A, P_hat, mu, gamma)"""
        data = self.source.model_dump(by_alias=True)
        data["P"] = self.p_hat
        return Cmp.model_validate(data)

    @field_serializer("p_hat")
    def _serialize_array(self, value: np.ndarray) -> list:
        return value.tolist()


class SampleBatch(ArrayModel):
    """
    Выборка пар (s, a) и эмпирическая занятость.
    env_steps - число взаимодействий со средой, потраченных на выборку.
    """
    pairs: np.ndarray
    occupancy: OccupancyMeasure
    mode: SamplingMode
    env_steps: int = Field(ge=0)
    burn_in: int = Field(default=0, ge=0)
    seed: RngSeed

    @field_validator("pairs", mode="before")
    @classmethod
    def _as_pairs(cls, value: Any) -> np.ndarray:
        pairs = np.array(value, dtype=np.int64).reshape(-1, 2)
        pairs.setflags(write=False)
        return pairs

    @property
    def size(self) -> int:
        return int(self.pairs.shape[0])

    @field_serializer("pairs")
    def _serialize_pairs(self, value: np.ndarray) -> list:
        return value.tolist()
