from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from polcomp.common.models import OccupancyMeasure, TabularPolicy

Metric = Literal["tv", "renyi2"]


class CandidateSet(BaseModel):
    """Конечный набор политик-кандидатов и их занятости (считаются один раз)"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    policies: List[TabularPolicy]
    occupancies: List[OccupancyMeasure]

    @model_validator(mode="after")
    def _check_lengths(self) -> "CandidateSet":
        if not self.policies:
            raise ValueError("candidate set is empty")
        if len(self.policies) != len(self.occupancies):
            raise ValueError(f"{len(self.policies)} policies but {len(self.occupancies)} occupancies")
        sizes = {d.values.size for d in self.occupancies}
        if len(sizes) != 1:
            raise ValueError(f"occupancies have different sizes: {sorted(sizes)}")
        return self

    def __len__(self) -> int:
        return len(self.policies)


class CompressionResult(BaseModel):
    """K представителей и достигнутый радиус max_i min_k D(d_i || d_k)"""
    representative_indices: List[int]
    achieved_radius: float
    metric: Metric
    sigma: float
    assignment: List[int] = []
    radius_trace: List[float] = []

    @field_validator("representative_indices")
    @classmethod
    def _check_indices(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("at least one representative is required")
        if len(set(value)) != len(value):
            raise ValueError(f"representatives are not distinct: {value}")
        return value

    @property
    def k(self) -> int:
        return len(self.representative_indices)


class CoverCheck(BaseModel):
    ok: bool
    worst_candidate: int
    worst_value: float
    worst_representative: Optional[int] = None
