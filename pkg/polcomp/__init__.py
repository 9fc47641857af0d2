"""Статистика сжатия пространства политик в табличных MDP"""

__version__ = "0.1.0"
