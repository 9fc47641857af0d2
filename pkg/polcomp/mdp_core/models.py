# Модели mdp_core наследуются из общих моделей
from polcomp.common.models import (
    Cmp, TabularPolicy, OccupancyMeasure, PolicyInducedChain, SpectralInfo
)

__all__ = ['Cmp', 'TabularPolicy', 'OccupancyMeasure', 'PolicyInducedChain', 'SpectralInfo']
