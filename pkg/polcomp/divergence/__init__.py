# Дивергенции и выборка по значимости
from .models import WeightDiagnostics
from .measures import TaggedInfinity, as_vector, total_variation, l1_distance, euclidean_distance, renyi2
from .importance import weight_diagnostics, is_estimate, is_variance_bound, empirical_variance

__all__ = [
    'WeightDiagnostics', 'TaggedInfinity', 'as_vector',
    'total_variation', 'l1_distance', 'euclidean_distance', 'renyi2',
    'weight_diagnostics', 'is_estimate', 'is_variance_bound', 'empirical_variance'
]
