from .common import (
    ArrayModel, frozen_array,
    # Модели CMP и политик
    Cmp, TabularPolicy, OccupancyMeasure, PolicyInducedChain, SpectralInfo,
    # Воспроизводимость
    RngSeed,
    # Служебные модели
    RunSummary, ErrorEntry
)

__all__ = [
    'ArrayModel', 'frozen_array',
    # Модели CMP и политик
    'Cmp', 'TabularPolicy', 'OccupancyMeasure', 'PolicyInducedChain', 'SpectralInfo',
    # Воспроизводимость
    'RngSeed',
    # Служебные модели
    'RunSummary', 'ErrorEntry'
]
