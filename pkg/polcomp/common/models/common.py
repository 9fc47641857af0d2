"""
Общие модели данных. Все тензоры хранятся как numpy-массивы только для чтения,
модели заморожены после создания.

Пары (s, a) везде разворачиваются построчно: индекс s * |A| + a.
Тензор переходов индексируется как P[s][a][s'].
"""

from typing import Optional, Dict, Any, List, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator


def frozen_array(value: Any) -> np.ndarray:
    """Копия в float64 с запретом записи"""
    array = np.array(value, dtype=float)
    array.setflags(write=False)
    return array


class ArrayModel(BaseModel):
    """База для моделей с numpy-полями"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, populate_by_name=True)


class Cmp(ArrayModel):
    """Управляемый марковский процесс (S, A, P, mu, gamma) с необязательной наградой"""
    num_states: int = Field(gt=0)
    num_actions: int = Field(gt=0)
    transition: np.ndarray = Field(alias="P")
    mu: np.ndarray
    gamma: float
    reward: Optional[np.ndarray] = None
    r_max: Optional[float] = None

    @field_validator("transition", "mu", "reward", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> Optional[np.ndarray]:
        return None if value is None else frozen_array(value)

    @model_validator(mode="before")
    @classmethod
    def _default_r_max(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("reward") is not None and data.get("r_max") is None:
            data = dict(data)
            data["r_max"] = max(float(np.max(np.asarray(data["reward"], dtype=float))), 0.0)
        return data

    @model_validator(mode="after")
    def _check_shapes(self) -> "Cmp":
        s, a = self.num_states, self.num_actions
        if self.transition.shape != (s, a, s):
            raise ValueError(f"transition must have shape {(s, a, s)}, got {self.transition.shape}")
        if self.mu.shape != (s,):
            raise ValueError(f"mu must have shape {(s,)}, got {self.mu.shape}")
        if self.reward is not None and self.reward.shape != (s, a):
            raise ValueError(f"reward must have shape {(s, a)}, got {self.reward.shape}")
        return self

    @property
    def num_pairs(self) -> int:
        return self.num_states * self.num_actions

    @field_serializer("transition", "mu", "reward")
    def _serialize_array(self, value: Optional[np.ndarray]) -> Optional[list]:
        return None if value is None else value.tolist()


class TabularPolicy(ArrayModel):
    """Табличная политика pi[s][a]"""
    pi: np.ndarray

    @field_validator("pi", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        array = frozen_array(value)
        if array.ndim != 2:
            raise ValueError(f"pi must be a matrix, got {array.ndim} dimensions")
        return array

    @property
    def num_states(self) -> int:
        return int(self.pi.shape[0])

    @property
    def num_actions(self) -> int:
        return int(self.pi.shape[1])

    @field_serializer("pi")
    def _serialize_array(self, value: np.ndarray) -> list:
        return value.tolist()


class OccupancyMeasure(ArrayModel):
    """Распределение по парам (s, a): точное или эмпирическое"""
    values: np.ndarray
    kind: Literal["exact", "empirical"] = "exact"
    sample_count: int = Field(default=0, ge=0)
    num_actions: int = Field(default=1, gt=0)

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return frozen_array(np.ravel(value))

    @model_validator(mode="after")
    def _check_layout(self) -> "OccupancyMeasure":
        if self.values.size % self.num_actions != 0:
            raise ValueError(f"{self.values.size} values cannot be split into rows of {self.num_actions} actions")
        return self

    @property
    def num_states(self) -> int:
        return self.values.size // self.num_actions

    def state_marginal(self) -> np.ndarray:
        """d(s) = sum_a d(s, a)"""
        return self.values.reshape(self.num_states, self.num_actions).sum(axis=1)

    @field_serializer("values")
    def _serialize_array(self, value: np.ndarray) -> list:
        return value.tolist()


class PolicyInducedChain(ArrayModel):
    """M[s][s'] = sum_a pi[s][a] P[s][a][s']"""
    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return frozen_array(value)

    @field_serializer("matrix")
    def _serialize_array(self, value: np.ndarray) -> list:
        return value.tolist()


class SpectralInfo(BaseModel):
    """Спектральная информация цепи для концентрации на марковской цепи"""
    model_config = ConfigDict(frozen=True)

    lambda2: float
    lambda2_modulus: float
    gamma0: float = Field(ge=0.0, le=1.0)
    reversible: bool
    eigenvalues: List[float]
    max_imag: float = 0.0
    stationary: List[float]


class RngSeed(BaseModel):
    """Сид и номер потока; одинаковая пара дает одинаковую последовательность"""
    model_config = ConfigDict(frozen=True)

    seed: int = Field(ge=0, lt=2**64)
    stream: int = Field(default=0, ge=0)

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.Philox(sequence))

    def with_stream(self, stream: int) -> "RngSeed":
        return RngSeed(seed=self.seed, stream=stream)

    def child_generator(self, index: int) -> np.random.Generator:
        """Независимый поток для подзадачи index внутри потока stream"""
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream, index))
        return np.random.Generator(np.random.Philox(sequence))


class RunSummary(BaseModel):
    """Итог работы команды CLI (аналог health check ответа)"""
    status: str
    service: str
    version: str
    stats: Dict[str, Any] = {}
    flags: List[str] = []


class ErrorEntry(BaseModel):
    """Детальная информация об ошибке"""
    service: str
    error_type: str
    error_message: str
    context: Optional[Dict[str, Any]] = None
