# Сэмплирование занятостей и генеративная модель
from .models import EstimatedModel, SampleBatch, SamplingMode
from .sampler import sample_occupancy, empirical_occupancy, samples_frame, categorical
from .estimation import estimate_transition_model, occupancy_on_estimate, l1_transition_errors, simulation_gap_bound

__all__ = [
    'EstimatedModel', 'SampleBatch', 'SamplingMode',
    'sample_occupancy', 'empirical_occupancy', 'samples_frame', 'categorical',
    'estimate_transition_model', 'occupancy_on_estimate', 'l1_transition_errors', 'simulation_gap_bound'
]
