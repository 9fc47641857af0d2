# Common components for all modules
from .config import Config, config

__all__ = ['Config', 'config']
