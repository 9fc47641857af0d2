# CMP, политики, точные занятости и спектральный зазор
from .models import Cmp, TabularPolicy, OccupancyMeasure, PolicyInducedChain, SpectralInfo
from .validation import validate_cmp, validate_policy, ensure_valid
from .chain import induced_chain, stationary_distribution, spectral_gap
from .occupancy import occupancy, occupancy_oracle, series_horizon
from .returns import exact_return, mc_return, as_pairs
from .policies import uniform_policy, deterministic_policy, random_policy, with_initial_distribution

__all__ = [
    'Cmp', 'TabularPolicy', 'OccupancyMeasure', 'PolicyInducedChain', 'SpectralInfo',
    'validate_cmp', 'validate_policy', 'ensure_valid',
    'induced_chain', 'stationary_distribution', 'spectral_gap',
    'occupancy', 'occupancy_oracle', 'series_horizon',
    'exact_return', 'mc_return', 'as_pairs',
    'uniform_policy', 'deterministic_policy', 'random_policy', 'with_initial_distribution'
]
