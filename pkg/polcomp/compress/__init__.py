# Сжатие пространства политик на конечном наборе кандидатов
from .models import CandidateSet, CompressionResult, CoverCheck, Metric
from .cover import divergence_matrix, greedy_cover, verify_cover
from .candidates import candidate_set, enumerate_deterministic, random_candidates

__all__ = [
    'CandidateSet', 'CompressionResult', 'CoverCheck', 'Metric',
    'divergence_matrix', 'greedy_cover', 'verify_cover',
    'candidate_set', 'enumerate_deterministic', 'random_candidates'
]
