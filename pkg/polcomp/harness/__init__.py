# Генерация MDP, аудиты и командная строка
from .models import ExperimentConfig, MdpSource, PolicySource, RunRecord, ExperimentReport, EstimateReport
from .generator import generate_random_mdp
from .experiments import (
    run_concentration_experiment, run_geometry_audit, run_estimate, records_frame, load_mdp, load_policy_source
)

__all__ = [
    'ExperimentConfig', 'MdpSource', 'PolicySource', 'RunRecord', 'ExperimentReport', 'EstimateReport',
    'generate_random_mdp',
    'run_concentration_experiment', 'run_geometry_audit', 'run_estimate', 'records_frame',
    'load_mdp', 'load_policy_source'
]
