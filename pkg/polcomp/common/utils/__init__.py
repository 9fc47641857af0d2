# Common utilities
from .base_service import BaseService
from .logging_utils import setup_logging, log_service_event

__all__ = [
    'BaseService',
    'setup_logging',
    'log_service_event'
]
