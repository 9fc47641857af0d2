import math
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_serializer, model_validator

from polcomp.common.config import config
from polcomp.common.models import SpectralInfo
from polcomp.planner import SampleBudget
from polcomp.sampling import SamplingMode

Setting = Literal["known_model", "unknown_model"]
MetricName = Literal["tv", "renyi2"]


class MdpSource(BaseModel):
    """MDP из файла (path) или из генератора"""
    path: Optional[str] = None
    num_states: int = Field(default=config.harness_config["num_states"], gt=0)
    num_actions: int = Field(default=config.harness_config["num_actions"], gt=0)
    branching: int = Field(default=config.harness_config["branching"], gt=0)
    gamma: float = Field(default=config.harness_config["gamma"], gt=0.0, lt=1.0)
    seed: int = Field(default=config.default_seed, ge=0)
    reversible: bool = False


class PolicySource(BaseModel):
    kind: Literal["uniform", "random", "file"] = "uniform"
    path: Optional[str] = None
    seed: int = Field(default=config.default_seed, ge=0)

    @model_validator(mode="after")
    def _check_path(self) -> "PolicySource":
        if self.kind == "file" and not self.path:
            raise ValueError("policy kind 'file' needs a path")
        return self


class ExperimentConfig(BaseModel):
    """Конфигурация аудита концентрации (JSON файл --config)"""
    name: str = "experiment"
    mdp: MdpSource = MdpSource()
    policy: PolicySource = PolicySource()
    setting: Setting = "known_model"
    metric: MetricName = "tv"
    threshold: float
    delta: float = Field(gt=0.0, lt=1.0)
    replicates: int = Field(default=config.harness_config["replicates"], ge=1)
    master_seed: int = Field(default=config.default_seed, ge=0)
    sampling_mode: SamplingMode = "geometric"
    max_per_pair: int = Field(default=config.harness_config["max_per_pair"], ge=1)
    output_dir: str = config.output_dir
    record_timings: bool = config.harness_config["record_timings"]

    @model_validator(mode="after")
    def _check_threshold(self) -> "ExperimentConfig":
        floor = 0.0 if self.metric == "tv" else 1.0
        if not self.threshold > floor:
            raise ValueError(f"{self.metric} threshold must exceed {floor}, got {self.threshold}")
        return self


class RunRecord(BaseModel):
    """Одна репликация при одном N: событие D(d_hat || d) > sigma"""
    replicate: int = Field(ge=0)
    n_used: int = Field(ge=0)
    formula_id: str
    divergence: float
    threshold: float
    violated: bool
    env_steps: int = Field(ge=0)
    wall_ms: float = 0.0

    @model_validator(mode="after")
    def _check_violation(self) -> "RunRecord":
        if self.violated != (self.divergence > self.threshold):
            raise ValueError("violated must equal divergence > threshold")
        return self


RECORD_COLUMNS = list(RunRecord.model_fields)


class ExperimentReport(BaseModel):
    name: str
    setting: Setting
    metric: MetricName
    threshold: float
    delta: float
    replicates: int
    master_seed: int
    mdp_seed: Optional[int] = None
    policy_seed: Optional[int] = None
    sampling_mode: SamplingMode
    budgets: List[SampleBudget] = []
    n_used: Dict[str, int] = {}
    violation_rates: Dict[str, float] = {}
    violation_rate: float = 0.0
    mean_steps_per_sample: Optional[float] = None
    spectral: Optional[SpectralInfo] = None
    passed: bool = True
    flags: List[str] = []
    records: List[RunRecord] = []


class EstimateReport(BaseModel):
    """Одна оценка d_hat и ее расхождения с точной занятостью"""
    setting: Setting
    formula_id: str
    n_used: int
    tv: float
    renyi2_forward: float
    renyi2_backward: float
    # Индексы нарушения носителя, если D2 = +inf
    renyi2_forward_offending: List[int] = []
    renyi2_backward_offending: List[int] = []
    weissman_epsilon: Optional[float] = None
    simulation_gap_bound: Optional[float] = None
    env_steps: int
    seed: int
    flags: List[str] = []
    estimate: List[float]
    exact: List[float]

    @field_serializer("renyi2_forward", "renyi2_backward", when_used="json")
    def _serialize_infinite(self, value: float) -> Union[float, str]:
        return "inf" if math.isinf(value) else value
